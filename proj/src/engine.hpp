#pragma once

#include "vendirl/misl.hpp"
#include "vendirl/trainer.hpp"

namespace vendirl::detail {

struct EngineResult {
  PolicySkillSet policy;
  Discriminator discriminator;  // default-constructed unless method == misl
  MetricLog log;
};

/// Shared epoch loop behind train / train_misl / the random baseline; the
/// methods differ only in reward source and whether updates run.
EngineResult run_training(const TrainConfig& cfg, Method method,
                          const TrainCallbacks& callbacks);

}  // namespace vendirl::detail
