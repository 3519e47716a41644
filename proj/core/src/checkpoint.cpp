#include "adhcn/checkpoint.hpp"

#include "adhcn/errors.hpp"
#include "adhcn/text.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace adhcn {

void save_checkpoint(const ModelParams& params, const TrainConfig& config,
                     const std::filesystem::path& path) {
    std::ostringstream out;
    out << kCheckpointTag << "\n";
    out << "fusion " << params.strategy.to_string() << "\n";
    out << "hidden " << config.hidden << "\n";
    out << "learning_rate " << format_double(config.learning_rate) << "\n";
    out << "weight_decay " << format_double(config.weight_decay) << "\n";
    out << "dropout " << format_double(config.dropout) << "\n";
    out << "max_epochs " << config.max_epochs << "\n";
    out << "patience " << config.patience << "\n";
    out << "seed " << config.seed << "\n";

    Index count = 0;
    params.for_each_param([&](const char*, const Matrix&, bool) { ++count; });
    out << "params " << count << "\n";
    params.for_each_param([&](const char* name, const Matrix& m, bool) {
        out << "param " << name << " " << m.rows() << " " << m.cols() << "\n";
        for (Index r = 0; r < m.rows(); ++r) {
            for (Index c = 0; c < m.cols(); ++c) {
                if (c > 0) out << " ";
                out << format_double(m(r, c));
            }
            out << "\n";
        }
    });
    out << "end\n";

    std::ofstream file(path, std::ios::binary);
    if (!file) throw SchemaError(path.string() + ": cannot open file for writing");
    file << out.str();
    if (!file) throw SchemaError(path.string() + ": write failed");
}

ModelParams load_checkpoint(const std::filesystem::path& path, TrainConfig* config) {
    std::ifstream file(path);
    if (!file) throw SchemaError(path.string() + ": cannot open file");

    std::string line;
    if (!std::getline(file, line) || line != kCheckpointTag)
        throw SchemaError(path.string() + ": not an " + std::string(kCheckpointTag) + " checkpoint");

    std::map<std::string, std::string> header;
    Index param_count = -1;
    while (std::getline(file, line)) {
        std::istringstream ls(line);
        std::string key, value;
        ls >> key >> value;
        if (key == "params") {
            param_count = std::stoll(value);
            break;
        }
        header[key] = value;
    }
    if (param_count < 0) throw SchemaError(path.string() + ": missing params section");
    if (!header.contains("fusion") || !header.contains("hidden"))
        throw SchemaError(path.string() + ": incomplete checkpoint header");

    TrainConfig cfg;
    cfg.fusion = FusionStrategy::parse(header.at("fusion"));
    cfg.hidden = std::stoll(header.at("hidden"));
    const auto get_num = [&](const char* key, double fallback) {
        double v = fallback;
        if (header.contains(key) && !parse_double(header.at(key), v))
            throw SchemaError(path.string() + ": bad value for " + key);
        return v;
    };
    cfg.learning_rate = get_num("learning_rate", cfg.learning_rate);
    cfg.weight_decay = get_num("weight_decay", cfg.weight_decay);
    cfg.dropout = get_num("dropout", cfg.dropout);
    if (header.contains("max_epochs")) cfg.max_epochs = std::stoll(header.at("max_epochs"));
    if (header.contains("patience")) cfg.patience = std::stoll(header.at("patience"));
    if (header.contains("seed")) cfg.seed = std::stoull(header.at("seed"));

    // read parameter blocks by name, then shape the final ModelParams
    std::map<std::string, Matrix> blocks;
    std::vector<std::string> order;
    for (Index p = 0; p < param_count; ++p) {
        if (!std::getline(file, line)) throw SchemaError(path.string() + ": truncated checkpoint");
        std::istringstream ls(line);
        std::string tag, name;
        Index rows = 0, cols = 0;
        ls >> tag >> name >> rows >> cols;
        if (tag != "param" || rows < 0 || cols < 0)
            throw SchemaError(path.string() + ": malformed param header '" + line + "'");
        Matrix m(rows, cols);
        for (Index r = 0; r < rows; ++r) {
            if (!std::getline(file, line)) throw SchemaError(path.string() + ": truncated values");
            std::istringstream vs(line);
            for (Index c = 0; c < cols; ++c) {
                std::string cell;
                if (!(vs >> cell)) throw SchemaError(path.string() + ": short value row");
                double v = 0.0;
                if (!parse_double(cell, v))
                    throw SchemaError(path.string() + ": bad value '" + cell + "'");
                m(r, c) = v;
            }
        }
        order.push_back(name);
        blocks.emplace(name, std::move(m));
    }
    if (!std::getline(file, line) || line != "end")
        throw SchemaError(path.string() + ": missing end marker");

    ModelDims dims;
    dims.hidden = cfg.hidden;
    if (!blocks.contains("classifier.weight") || !blocks.contains("classifier.bias"))
        throw SchemaError(path.string() + ": checkpoint lacks classifier parameters");
    dims.num_classes = blocks.at("classifier.weight").cols();
    if (blocks.contains("hg_channel.weight"))
        dims.num_features = blocks.at("hg_channel.weight").rows();
    else if (blocks.contains("le_channel.weight"))
        dims.num_features = blocks.at("le_channel.weight").rows();
    else
        throw SchemaError(path.string() + ": checkpoint lacks channel parameters");

    ModelParams params = zero_params(dims, cfg.fusion);
    std::size_t filled = 0;
    params.for_each_param([&](const char* name, Matrix& m, bool) {
        const auto it = blocks.find(name);
        if (it == blocks.end()) throw SchemaError(path.string() + ": missing parameter " + name);
        if (it->second.rows() != m.rows() || it->second.cols() != m.cols())
            throw SchemaError(path.string() + ": shape mismatch for " + name);
        m = it->second;
        ++filled;
    });
    if (filled != order.size())
        throw SchemaError(path.string() + ": checkpoint has extra parameters for strategy " +
                          cfg.fusion.to_string());

    if (config) *config = cfg;
    return params;
}

} // namespace adhcn
