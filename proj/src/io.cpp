#include "povmic/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace povmic {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", c);
      out += buf;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

void matrix_rows(std::ostringstream& os, const CMatrix& m) {
  os << "[";
  for (int r = 0; r < m.rows(); ++r) {
    if (r) os << ",";
    os << "[";
    for (int c = 0; c < m.cols(); ++c) {
      if (c) os << ",";
      os << "[" << fmt(m(r, c).real()) << "," << fmt(m(r, c).imag()) << "]";
    }
    os << "]";
  }
  os << "]";
}

CMatrix parse_matrix(const nlohmann::json& rows, int dim) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
    throw std::invalid_argument("matrix: wrong row count");
  }
  CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const auto& row = rows.at(r);
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw std::invalid_argument("matrix: wrong column count");
    }
    for (int c = 0; c < dim; ++c) {
      const auto& cell = row.at(c);
      if (!cell.is_array() || cell.size() != 2) {
        throw std::invalid_argument("matrix: entries must be [re, im] pairs");
      }
      m(r, c) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return m;
}

nlohmann::ordered_json matrix_json(const CMatrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::ordered_json envelope_json(const ReportEnvelope& env) {
  nlohmann::ordered_json j;
  j["tool_version"] = env.tool_version;
  j["invocation"] = env.invocation;
  j["seed"] = env.seed;
  return j;
}

}  // namespace

std::string povm_to_json(const Povm& povm) {
  std::ostringstream os;
  os << "{\n  \"dim\": " << povm.dim() << ",\n  \"labels\": [";
  for (int x = 0; x < povm.size(); ++x) {
    if (x) os << ",";
    os << "\"" << escape(povm.labels()[x]) << "\"";
  }
  os << "],\n  \"effects\": [\n";
  for (int x = 0; x < povm.size(); ++x) {
    os << "    ";
    matrix_rows(os, povm.effect(x).mat());
    if (x + 1 < povm.size()) os << ",";
    os << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

Povm povm_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int dim = j.at("dim").get<int>();
  if (dim < 1) throw std::invalid_argument("povm: dim must be >= 1");
  const auto& effects_json = j.at("effects");
  if (!effects_json.is_array() || effects_json.empty()) {
    throw std::invalid_argument("povm: effects must be a nonempty array");
  }
  std::vector<Hermitian> effects;
  effects.reserve(effects_json.size());
  for (const auto& ej : effects_json) effects.emplace_back(parse_matrix(ej, dim));
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    for (const auto& l : j.at("labels")) labels.push_back(l.get<std::string>());
    if (!labels.empty() && labels.size() != effects.size()) {
      throw std::invalid_argument("povm: labels length mismatch");
    }
  }
  return Povm(dim, std::move(effects), std::move(labels));
}

std::string state_to_json(const Hermitian& state) {
  std::ostringstream os;
  os << "{\n  \"dim\": " << state.dim() << ",\n  \"matrix\": ";
  matrix_rows(os, state.mat());
  os << "\n}\n";
  return os.str();
}

Hermitian state_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int dim = j.at("dim").get<int>();
  if (dim < 1) throw std::invalid_argument("state: dim must be >= 1");
  return Hermitian(parse_matrix(j.at("matrix"), dim));
}

std::string matrices_to_json(int dim, const std::vector<Hermitian>& mats) {
  std::ostringstream os;
  os << "{\n  \"dim\": " << dim << ",\n  \"matrices\": [\n";
  for (std::size_t i = 0; i < mats.size(); ++i) {
    os << "    ";
    matrix_rows(os, mats[i].mat());
    if (i + 1 < mats.size()) os << ",";
    os << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

std::pair<int, std::vector<Hermitian>> matrices_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int dim = j.at("dim").get<int>();
  if (dim < 1) throw std::invalid_argument("matrices: dim must be >= 1");
  std::vector<Hermitian> mats;
  for (const auto& mj : j.at("matrices")) mats.emplace_back(parse_matrix(mj, dim));
  if (mats.empty()) throw std::invalid_argument("matrices: empty list");
  return {dim, std::move(mats)};
}

std::string stats_to_json(const StatisticsVector& stats, const std::string& povm_ref) {
  std::ostringstream os;
  os << "{\n  \"povm_ref\": \"" << escape(povm_ref) << "\",\n  \"probabilities\": [";
  for (int i = 0; i < stats.probabilities.size(); ++i) {
    if (i) os << ",";
    os << fmt(stats.probabilities(i));
  }
  os << "]\n}\n";
  return os.str();
}

StatisticsVector stats_from_json(const std::string& text, std::string* povm_ref) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (povm_ref) *povm_ref = j.value("povm_ref", std::string());
  const auto& probs = j.at("probabilities");
  if (!probs.is_array() || probs.empty()) {
    throw std::invalid_argument("stats: probabilities must be a nonempty array");
  }
  StatisticsVector out;
  out.probabilities = RVector(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    out.probabilities(static_cast<int>(i)) = probs.at(i).get<double>();
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string certify_report_json(const CertifyReport& rep, const ReportEnvelope& env) {
  nlohmann::ordered_json j = envelope_json(env);
  j["command"] = "certify";
  j["property"] = to_string(rep.property);
  j["verdict"] = to_string(rep.verdict);
  j["strength"] = to_string(rep.strength);
  j["span_dim"] = rep.span_dim;
  j["complement_dim"] = rep.complement_dim;
  j["note"] = rep.note;
  if (rep.certificate) {
    const RankCertificate& c = *rep.certificate;
    nlohmann::ordered_json cj;
    cj["target"] = c.target == RankCertificate::Target::rank ? "rank" : "rank_pm";
    cj["method"] =
        c.method == RankCertificate::Method::exhaustive ? "exhaustive" : "randomized";
    cj["min_found"] = c.min_found;
    cj["borderline_found"] = c.borderline_found;
    cj["witness_tail"] = c.witness_tail;
    cj["evaluations"] = c.evaluations;
    cj["trials"] = c.trials;
    cj["tol"] = c.tol;
    j["certificate"] = std::move(cj);
  }
  if (rep.witness_element) j["witness_element"] = matrix_json(rep.witness_element->mat());
  if (rep.witness_states) {
    j["witness_states"] = {matrix_json(rep.witness_states->first.mat()),
                           matrix_json(rep.witness_states->second.mat())};
    j["witness_stats_distance"] = rep.witness_stats_distance;
  }
  return j.dump(2) + "\n";
}

std::string proposition_report_json(const PropositionReport& rep,
                                    const ReportEnvelope& env) {
  nlohmann::ordered_json j = envelope_json(env);
  j["proposition"] = rep.proposition;
  nlohmann::ordered_json inst;
  for (const auto& [key, value] : rep.instance) inst[key] = value;
  j["instance"] = std::move(inst);
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}});
  }
  j["checks"] = std::move(checks);
  j["seed"] = rep.seed;
  j["refuted"] = rep.refuted;
  if (rep.witness_states) {
    j["witness_states"] = {matrix_json(rep.witness_states->first.mat()),
                           matrix_json(rep.witness_states->second.mat())};
    j["witness_stats_distance"] = rep.witness_stats_distance;
  }
  return j.dump(2) + "\n";
}

std::string reconstruction_report_json(const ReconstructionOutput& out,
                                       const ReportEnvelope& env) {
  nlohmann::ordered_json j = envelope_json(env);
  j["command"] = "reconstruct";
  j["mode"] = out.mode;
  j["state"] = matrix_json(out.state.mat());
  j["residual"] = out.residual;
  j["stats_distance"] = out.stats_distance;
  j["span_dim"] = out.span_dim;
  if (out.fidelity_reference) j["fidelity_reference"] = *out.fidelity_reference;
  if (out.warning) j["warning"] = *out.warning;
  return j.dump(2) + "\n";
}

}  // namespace povmic
