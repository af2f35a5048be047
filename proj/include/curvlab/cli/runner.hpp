#pragma once

#include "curvlab/cli/config.hpp"
#include "curvlab/cli/report.hpp"
#include "curvlab/parallel.hpp"

namespace curvlab::cli {

ExperimentRecord run_experiment(const ExperimentConfig& config, std::uint64_t seed,
                                Execution exec = Execution::Parallel);

/// Runs experiments in order; report assembly is single-threaded.
VerificationReport run_suite(const SuiteConfig& suite, Execution exec = Execution::Parallel);

} // namespace curvlab::cli
