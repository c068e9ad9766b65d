#pragma once

// Number formatting, CSV assembly, and the JSON fixture format for
// (Hamiltonian, initial state) pairs.

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "krylovlab/errors.hpp"
#include "krylovlab/tensor_core.hpp"

namespace krylovlab {

inline constexpr const char* kFixtureSchema = "krylovlab.fixture/1";

/// Shortest decimal string that parses back to exactly `x`.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (res.ec != std::errc{}) throw DiagnosticError("format_double failed");
  return std::string(buf.data(), res.ptr);
}

class CsvWriter {
 public:
  void header(const std::vector<std::string>& cols) { row_strings(cols); }

  CsvWriter& cell(const std::string& s) {
    sep();
    out_ << s;
    return *this;
  }
  CsvWriter& cell(double x) { return cell(format_double(x)); }
  CsvWriter& cell(long long x) { return cell(std::to_string(x)); }
  CsvWriter& cell(int x) { return cell(std::to_string(x)); }
  CsvWriter& empty() { return cell(std::string{}); }
  void end_row() {
    out_ << '\n';
    first_ = true;
  }
  void blank_line() { out_ << '\n'; }

  std::string str() const { return out_.str(); }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }
  void row_strings(const std::vector<std::string>& cols) {
    for (const auto& c : cols) cell(c);
    end_row();
  }

  std::ostringstream out_;
  bool first_ = true;
};

inline nlohmann::json to_json(const Vector& v) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"re", re}, {"im", im}};
}

inline nlohmann::json to_json(const Matrix& m) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json rr = nlohmann::json::array(), ii = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

inline Vector vector_from_json(const nlohmann::json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (!re.is_array() || !im.is_array() || re.size() != im.size())
    throw StructuralError("fixture: vector re/im arrays must have equal length");
  Vector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) v(static_cast<Eigen::Index>(i)) = cplx(re[i].get<double>(), im[i].get<double>());
  return v;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (!re.is_array() || !im.is_array() || re.size() != im.size())
    throw StructuralError("fixture: matrix re/im arrays must have equal shape");
  const auto rows = static_cast<Eigen::Index>(re.size());
  Matrix m(rows, rows);
  for (std::size_t i = 0; i < re.size(); ++i) {
    if (re[i].size() != re.size() || im[i].size() != re.size()) throw StructuralError("fixture: matrix must be square");
    for (std::size_t k = 0; k < re.size(); ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = cplx(re[i][k].get<double>(), im[i][k].get<double>());
  }
  return m;
}

struct Fixture {
  HermitianOperator hamiltonian;
  StateVector state;
};

inline nlohmann::json fixture_to_json(const HermitianOperator& h, const StateVector& psi) {
  return {{"schema", kFixtureSchema},
          {"party_dims", psi.structure().party_dims()},
          {"hamiltonian", to_json(h.matrix())},
          {"state", to_json(psi.amplitudes())}};
}

inline Fixture fixture_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != kFixtureSchema) throw StructuralError("fixture: unsupported schema");
    HilbertStructure s(j.at("party_dims").get<std::vector<int>>());
    HermitianOperator h(s, matrix_from_json(j.at("hamiltonian")));
    StateVector psi(s, vector_from_json(j.at("state")));
    return {std::move(h), std::move(psi)};
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("fixture: malformed JSON: ") + e.what());
  }
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError("invalid JSON in '" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StructuralError("cannot write '" + path + "'");
  out << text;
}

}  // namespace krylovlab
