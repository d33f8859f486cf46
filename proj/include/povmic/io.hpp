#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "povmic/povm.hpp"
#include "povmic/propositions.hpp"
#include "povmic/rank_search.hpp"
#include "povmic/tomography.hpp"

namespace povmic {

/// Serialization keeps every double at 17 significant digits, so that a
/// load/save cycle reproduces the file byte for byte.

std::string povm_to_json(const Povm& povm);
Povm povm_from_json(const std::string& text);

std::string state_to_json(const Hermitian& state);
Hermitian state_from_json(const std::string& text);

/// Generator lists for gen from-span: {"dim": d, "matrices": [...]}.
std::string matrices_to_json(int dim, const std::vector<Hermitian>& mats);
std::pair<int, std::vector<Hermitian>> matrices_from_json(const std::string& text);

std::string stats_to_json(const StatisticsVector& stats, const std::string& povm_ref);
StatisticsVector stats_from_json(const std::string& text, std::string* povm_ref = nullptr);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Common header baked into every report.
struct ReportEnvelope {
  std::string tool_version;
  std::string invocation;
  std::uint64_t seed = 0;
};

std::string certify_report_json(const CertifyReport& rep, const ReportEnvelope& env);
std::string proposition_report_json(const PropositionReport& rep, const ReportEnvelope& env);

struct ReconstructionOutput {
  std::string mode;  // "linear" | "pure"
  Hermitian state;
  double residual = 0.0;
  double stats_distance = 0.0;
  int span_dim = 0;
  std::optional<double> fidelity_reference;
  std::optional<std::string> warning;
};

std::string reconstruction_report_json(const ReconstructionOutput& out,
                                       const ReportEnvelope& env);

}  // namespace povmic
