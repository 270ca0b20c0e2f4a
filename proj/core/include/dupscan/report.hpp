// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#pragma once

#include <string>

#include "dupscan/cluster.hpp"
#include "dupscan/graph.hpp"
#include "dupscan/ratcliff.hpp"
#include "dupscan/screening.hpp"
#include "dupscan/synth.hpp"
#include "json.hpp"

namespace dupscan {

// JSON shapes for every emitted artifact. Key names are part of the file
// contract; nlohmann::json orders keys deterministically.

nlohmann::json to_json(const FilterStats& stats);
nlohmann::json to_json(const StatsReport& report);
nlohmann::json to_json(const ConsistencyReport& report);
nlohmann::json to_json(const SweepReport& report);
nlohmann::json to_json(const DupPairSet& pairs);         // the Table-1 row shape
nlohmann::json to_json(const GraphPartition& partition);
nlohmann::json to_json(const ProfileReport& report);
nlohmann::json to_json(const SummaryReport& report);
nlohmann::json to_json(const KeywordReport& report);
nlohmann::json to_json(const ToxicityReport& report);
nlohmann::json to_json(const SpeciousReport& report);
nlohmann::json to_json(const TimelineReport& report);
nlohmann::json to_json(const EvalReport& report);

void write_json(const nlohmann::json& j, const std::string& path);

/// CSV `label,n_clusters,n_bjp,n_inc`, one row per toxicity dimension.
void write_toxicity_table_csv(const ToxicityReport& report, const std::string& path);

/// CSV `date,count`, zero-filled over the inclusive range.
void write_timeline_csv(const TimelineReport& report, const std::string& path);

/// Consolidates prior stage outputs from output_dir into one JSON document
/// plus a human-readable summary. Missing stage artifacts are listed as
/// absent rather than failing.
struct ConsolidatedReport {
  nlohmann::json document;
  std::string text;
};

ConsolidatedReport build_report(const std::string& output_dir);

}  // namespace dupscan
