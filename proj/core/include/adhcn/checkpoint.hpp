#pragma once

#include "adhcn/model.hpp"
#include "adhcn/train.hpp"

#include <filesystem>

namespace adhcn {

inline constexpr const char* kCheckpointTag = "adhcn-ckpt-v1";

// Self-describing text checkpoint: format tag, config echo, then each
// parameter as "param <name> <rows> <cols>" followed by row-major values in
// full round-trip decimal precision.
void save_checkpoint(const ModelParams& params, const TrainConfig& config,
                     const std::filesystem::path& path);

// Restores parameters bit-exactly; fills config when given.
ModelParams load_checkpoint(const std::filesystem::path& path, TrainConfig* config = nullptr);

} // namespace adhcn
