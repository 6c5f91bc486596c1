#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "mixtest/simulation.hpp"
#include "mixtest/statistic.hpp"

namespace mixtest {

// Reads a sample file with header `group,value,w1,...,wM`. Row order within
// each group becomes the observation index. Weight rows must be nonnegative
// and sum to 1 within 1e-9; drift below that is renormalized away.
PairedSample parse_sample_csv(const std::string& path);

void write_sample_csv(const std::string& path, const PairedSample& sample);

// 50-bin histogram per group: columns group,bin_lo,bin_hi,count. The bin
// range spans the pooled sample.
void write_histogram_csv(const std::string& path, const PairedSample& sample,
                         int bins = 50);

// One row per n; the leading columns follow the published-table schema.
void write_reports_csv(const std::string& path,
                       const std::vector<ExperimentReport>& reports);

nlohmann::json outcome_to_json(const TestOutcome& outcome);

}  // namespace mixtest
