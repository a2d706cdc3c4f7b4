#include "spinlab/spin_system.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "spinlab/errors.hpp"

namespace spinlab {

int SpinSystem::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i) {
    if (labels[i] == label) return i;
  }
  return -1;
}

int SpinSystem::require_spin(const std::string& label) const {
  const int i = index_of(label);
  if (i < 0) throw ParseError("unknown spin " + label);
  return i;
}

void SpinSystem::validate() const {
  const int n = size();
  if (n < 1) throw ParseError("spin system needs at least one spin");
  if (static_cast<int>(offset_hz.size()) != n ||
      static_cast<int>(t2_s.size()) != n || j_hz.rows() != n ||
      j_hz.cols() != n) {
    throw ParseError("spin system field sizes disagree");
  }
  std::set<std::string> seen(labels.begin(), labels.end());
  if (static_cast<int>(seen.size()) != n) {
    throw ParseError("spin labels must be unique");
  }
  for (int i = 0; i < n; ++i) {
    if (!(t2_s[i] > 0.0)) {
      throw ParseError("T2 must be positive for spin " + labels[i]);
    }
    if (!std::isfinite(offset_hz[i])) {
      throw ParseError("offset must be finite for spin " + labels[i]);
    }
    if (j_hz(i, i) != 0.0) throw ParseError("J diagonal must be zero");
    for (int j = 0; j < n; ++j) {
      if (j_hz(i, j) != j_hz(j, i)) throw ParseError("J must be symmetric");
    }
  }
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

double parse_number(const std::string& w, const std::string& origin, int line) {
  try {
    size_t pos = 0;
    const double v = std::stod(w, &pos);
    if (pos != w.size()) throw std::invalid_argument(w);
    return v;
  } catch (const std::exception&) {
    throw ParseError(origin + ":" + std::to_string(line) +
                     ": expected a number, got '" + w + "'");
  }
}

}  // namespace

SpinSystem SpinSystem::from_string(const std::string& text,
                                   const std::string& origin) {
  SpinSystem sys;
  struct JEntry {
    std::string a, b;
    double value;
    int line;
  };
  std::vector<JEntry> j_entries;
  std::vector<double> t2;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const auto eq = raw.find('=');
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos) {
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": expected 'key = values'");
    }
    const auto key_words = split_ws(raw.substr(0, eq));
    const auto values = split_ws(raw.substr(eq + 1));
    if (key_words.size() != 1 || values.empty()) {
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": expected 'key = values'");
    }
    const std::string& key = key_words[0];
    if (key == "labels") {
      sys.labels = values;
    } else if (key == "offsets_hz") {
      sys.offset_hz.clear();
      for (const auto& w : values)
        sys.offset_hz.push_back(parse_number(w, origin, lineno));
    } else if (key == "T2_s") {
      t2.clear();
      for (const auto& w : values)
        t2.push_back(parse_number(w, origin, lineno));
    } else if (key == "J_hz") {
      if (values.size() != 3) {
        throw ParseError(origin + ":" + std::to_string(lineno) +
                         ": J_hz needs '<spin> <spin> <value>'");
      }
      j_entries.push_back(
          {values[0], values[1], parse_number(values[2], origin, lineno), lineno});
    } else {
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": unknown key '" + key + "'");
    }
  }

  const int n = sys.size();
  if (n == 0) throw ParseError(origin + ": missing 'labels'");
  if (sys.offset_hz.empty()) sys.offset_hz.assign(n, 0.0);
  sys.t2_s = t2.empty() ? std::vector<double>(n, 6.0) : t2;
  sys.j_hz = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : j_entries) {
    const int a = sys.index_of(e.a);
    const int b = sys.index_of(e.b);
    if (a < 0 || b < 0 || a == b) {
      throw ParseError(origin + ":" + std::to_string(e.line) +
                       ": J_hz names unknown or identical spins");
    }
    sys.j_hz(a, b) = e.value;
    sys.j_hz(b, a) = e.value;
  }
  sys.validate();
  return sys;
}

SpinSystem SpinSystem::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open system file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), path);
}

std::string SpinSystem::to_config_string() const {
  std::ostringstream out;
  out << "labels =";
  for (const auto& l : labels) out << " " << l;
  out << "\noffsets_hz =";
  for (double v : offset_hz) out << " " << v;
  out << "\n";
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) {
      if (j_hz(i, j) != 0.0) {
        out << "J_hz = " << labels[i] << " " << labels[j] << " " << j_hz(i, j)
            << "\n";
      }
    }
  }
  out << "T2_s =";
  for (double v : t2_s) out << " " << v;
  out << "\n";
  return out.str();
}

SpinSystem SpinSystem::bromotrifluoroethylene() {
  SpinSystem sys;
  sys.labels = {"A", "B", "C"};
  sys.offset_hz = {0.0, -13200.0, 9500.0};
  sys.j_hz = Eigen::MatrixXd::Zero(3, 3);
  sys.j_hz(0, 1) = sys.j_hz(1, 0) = -122.1;
  sys.j_hz(0, 2) = sys.j_hz(2, 0) = 75.0;
  sys.j_hz(1, 2) = sys.j_hz(2, 1) = 53.8;
  sys.t2_s = {6.0, 6.0, 6.0};
  return sys;
}

}  // namespace spinlab
