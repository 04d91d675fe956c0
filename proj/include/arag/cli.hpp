#pragma once

#include <string>
#include <vector>

#include "arag/config.hpp"

namespace arag {

/// All commands write into config.out_dir, overwrite their own outputs, and
/// never touch input files. They throw ConfigError for usage problems and
/// std::runtime_error for operational failures; dispatch() maps those to
/// exit codes 2 and 1.

/// Builds the index and writes the snapshot; prints doc_count and avg_doc_len.
int cmd_index(const RunConfig& config);

/// Samples queries per dataset, runs all three strategies on the sample,
/// and writes outcome triples, the labeled training set, and the exclusion
/// list of consumed query ids.
int cmd_label(const RunConfig& config);

/// Trains the complexity classifier from a training-set file and writes the
/// model; logs per-epoch loss.
int cmd_train(const RunConfig& config);

/// Runs one of {no_retrieval, single, multi, adaptive, oracle} over the
/// query set and writes a trace and a report.
int cmd_evaluate(const RunConfig& config, const std::string& mode);

/// Prints a side-by-side metric table for the given trace files.
int cmd_report(const RunConfig& config, const std::vector<std::string>& trace_paths);

/// Runs a command and maps exceptions to exit codes (0 success, 1 partial or
/// operational failure, 2 configuration/usage error).
int dispatch(const std::string& command, const RunConfig& config,
             const std::string& mode, const std::vector<std::string>& trace_paths);

}  // namespace arag
