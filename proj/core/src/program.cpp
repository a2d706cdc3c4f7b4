#include "spinlab/program.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "spinlab/errors.hpp"
#include "spinlab/format.hpp"

namespace spinlab {

namespace {

struct LineCursor {
  const std::string& origin;
  std::string text;  // comment already stripped
  int lineno;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg, size_t at) const {
    throw ParseError(origin + ":" + std::to_string(lineno) + ":" +
                     std::to_string(at + 1) + ": " + msg);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos); }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  /// Next run of non-space, non-delimiter characters.
  std::string word(const char* extra_delims = "") {
    skip_ws();
    const size_t start = pos;
    while (pos < text.size()) {
      const char c = text[pos];
      if (std::isspace(static_cast<unsigned char>(c))) break;
      bool is_delim = false;
      for (const char* d = extra_delims; *d; ++d) {
        if (c == *d) is_delim = true;
      }
      if (is_delim) break;
      ++pos;
    }
    return text.substr(start, pos - start);
  }
  double number() {
    skip_ws();
    const size_t start = pos;
    size_t idx = 0;
    double v = 0.0;
    try {
      v = std::stod(text.substr(pos), &idx);
    } catch (const std::exception&) {
      fail("expected a number", start);
    }
    pos += idx;
    return v;
  }
};

// delay expressions: + - * / ( ) numbers and J[i,j]
class ExprParser {
 public:
  ExprParser(LineCursor& cur, const SpinSystem& sys) : cur_(cur), sys_(sys) {}

  double parse() {
    const double v = expr();
    if (!cur_.at_end()) cur_.fail("unexpected trailing text in expression");
    return v;
  }

 private:
  double expr() {
    double v = term();
    while (true) {
      if (cur_.consume('+')) {
        v += term();
      } else if (cur_.consume('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }
  double term() {
    double v = factor();
    while (true) {
      if (cur_.consume('*')) {
        v *= factor();
      } else if (cur_.consume('/')) {
        const size_t at = cur_.pos;
        const double d = factor();
        if (d == 0.0) cur_.fail("division by zero", at);
        v /= d;
      } else {
        return v;
      }
    }
  }
  double factor() {
    if (cur_.consume('-')) return -factor();
    if (cur_.consume('(')) {
      const double v = expr();
      if (!cur_.consume(')')) cur_.fail("expected ')'");
      return v;
    }
    const char c = cur_.peek();
    if (c == 'J') {
      const size_t at = cur_.pos;
      ++cur_.pos;
      if (!cur_.consume('[')) cur_.fail("expected '[' after J");
      const std::string s1 = cur_.word(",]");
      if (!cur_.consume(',')) cur_.fail("expected ',' in J[i,j]");
      const std::string s2 = cur_.word(",]");
      if (!cur_.consume(']')) cur_.fail("expected ']' in J[i,j]");
      const int i = sys_.index_of(s1);
      const int j = sys_.index_of(s2);
      if (i < 0) cur_.fail("unknown spin " + s1, at);
      if (j < 0) cur_.fail("unknown spin " + s2, at);
      if (i == j) cur_.fail("J[i,j] needs two distinct spins", at);
      return sys_.j_hz(i, j);
    }
    return cur_.number();
  }

  LineCursor& cur_;
  const SpinSystem& sys_;
};

std::vector<int> parse_spin_list(LineCursor& cur, const SpinSystem& sys) {
  std::vector<int> spins;
  while (true) {
    cur.skip_ws();
    const size_t at = cur.pos;
    const std::string name = cur.word(",&");
    if (name.empty()) cur.fail("expected a spin name");
    const int idx = sys.index_of(name);
    if (idx < 0) cur.fail("unknown spin " + name, at);
    spins.push_back(idx);
    if (!cur.consume(',')) return spins;
  }
}

PulseGroup parse_pulse_group(LineCursor& cur, const SpinSystem& sys) {
  PulseGroup g;
  g.spins = parse_spin_list(cur, sys);
  cur.skip_ws();
  const size_t at = cur.pos;
  const std::string spec = cur.word("&");
  if (spec.size() < 2 || (spec[0] != 'x' && spec[0] != 'y')) {
    cur.fail("expected axis+angle like y90 or x-180", at);
  }
  g.axis = spec[0] == 'x' ? Axis::X : Axis::Y;
  const std::string angle_text = spec.substr(1);
  size_t idx = 0;
  try {
    g.angle_deg = std::stod(angle_text, &idx);
  } catch (const std::exception&) {
    idx = std::string::npos;
  }
  if (idx != angle_text.size() || g.angle_deg == 0.0 ||
      !std::isfinite(g.angle_deg)) {
    cur.fail("malformed angle '" + angle_text + "'", at + 1);
  }
  return g;
}

}  // namespace

double eval_delay_expr(const std::string& expr, const SpinSystem& sys) {
  LineCursor cur{"expr", expr, 1};
  return ExprParser(cur, sys).parse();
}

PulseProgram parse_program(const std::string& text, const SpinSystem& sys,
                           const std::string& origin) {
  PulseProgram prog;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool saw_acquire = false;

  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    LineCursor cur{origin, raw, lineno};
    if (cur.at_end()) continue;

    const size_t kw_at = cur.pos;
    const std::string kw = cur.word();
    if (kw != "acquire" && saw_acquire) {
      cur.fail("statements after acquire are not allowed", kw_at);
    }

    if (kw == "system") {
      const std::string ref = cur.word();
      if (ref.empty()) cur.fail("expected a file reference after 'system'");
      if (!prog.system_ref.empty()) cur.fail("duplicate system header", kw_at);
      prog.system_ref = ref;
    } else if (kw == "frame") {
      cur.skip_ws();
      const size_t at = cur.pos;
      const std::string mode = cur.word();
      if (mode == "resonant") {
        prog.sequence.add(SequenceEvent::frame_shift(Frame::resonant(sys)));
      } else if (mode == "uncouple") {
        cur.skip_ws();
        const size_t sat = cur.pos;
        const std::string label = cur.word();
        const int spin = sys.index_of(label);
        if (spin < 0) cur.fail("unknown spin " + label, sat);
        prog.sequence.add(
            SequenceEvent::frame_shift(uncoupling_offsets(sys, spin)));
      } else {
        cur.fail("expected 'resonant' or 'uncouple <spin>'", at);
      }
    } else if (kw == "pulse") {
      std::vector<PulseGroup> groups;
      groups.push_back(parse_pulse_group(cur, sys));
      while (cur.consume('&')) groups.push_back(parse_pulse_group(cur, sys));
      SequenceEvent ev = SequenceEvent::pulse(std::move(groups));
      try {
        ev.validate(sys);
      } catch (const ParseError& e) {
        cur.fail(e.what(), kw_at);
      }
      prog.sequence.add(std::move(ev));
    } else if (kw == "delay") {
      cur.skip_ws();
      const size_t at = cur.pos;
      const double seconds = ExprParser(cur, sys).parse();
      if (seconds < 0.0) cur.fail("negative delay", at);
      if (!std::isfinite(seconds)) cur.fail("delay is not finite", at);
      prog.sequence.add(SequenceEvent::delay(seconds));
    } else if (kw == "acquire") {
      Acquisition acq;
      acq.spins = parse_spin_list(cur, sys);
      cur.skip_ws();
      const size_t at = cur.pos;
      acq.duration_s = cur.number();
      acq.dt_s = cur.number();
      if (!(acq.dt_s > 0.0) || acq.duration_s < 2.0 * acq.dt_s) {
        cur.fail("acquire needs duration >= 2*dt and dt > 0", at);
      }
      prog.acquisitions.push_back(std::move(acq));
      saw_acquire = true;
    } else {
      cur.fail("unknown keyword '" + kw + "'", kw_at);
    }
    if (!cur.at_end()) cur.fail("unexpected trailing text");
  }
  return prog;
}

namespace {

std::string spin_list_text(const std::vector<int>& spins,
                           const SpinSystem& sys) {
  std::string out;
  for (size_t i = 0; i < spins.size(); ++i) {
    if (i) out += ",";
    out += sys.labels[spins[i]];
  }
  return out;
}

std::string frame_text(const Frame& frame, const SpinSystem& sys) {
  if (frame == Frame::resonant(sys)) return "frame resonant";
  for (int spin = 0; spin < sys.size(); ++spin) {
    if (frame == uncoupling_offsets(sys, spin)) {
      return "frame uncouple " + sys.labels[spin];
    }
  }
  throw ParseError("frame is not expressible in the program format");
}

}  // namespace

std::string print_program(const PulseProgram& prog, const SpinSystem& sys) {
  std::ostringstream out;
  if (!prog.system_ref.empty()) out << "system " << prog.system_ref << "\n";
  for (const auto& ev : prog.sequence.events) {
    switch (ev.kind) {
      case SequenceEvent::Kind::FrameShift:
        out << frame_text(ev.frame, sys) << "\n";
        break;
      case SequenceEvent::Kind::Delay:
        out << "delay " << format_double(ev.delay_s) << "\n";
        break;
      case SequenceEvent::Kind::Pulse: {
        out << "pulse ";
        for (size_t i = 0; i < ev.pulses.size(); ++i) {
          const auto& g = ev.pulses[i];
          // canonical axes are x and y with signed angles
          Axis axis = g.axis;
          double angle = g.angle_deg;
          if (axis == Axis::MinusX) {
            axis = Axis::X;
            angle = -angle;
          } else if (axis == Axis::MinusY) {
            axis = Axis::Y;
            angle = -angle;
          }
          if (i) out << " & ";
          out << spin_list_text(g.spins, sys) << " " << axis_to_string(axis)
              << format_double(angle);
        }
        out << "\n";
        break;
      }
    }
  }
  for (const auto& acq : prog.acquisitions) {
    out << "acquire " << spin_list_text(acq.spins, sys) << " "
        << format_double(acq.duration_s) << " " << format_double(acq.dt_s)
        << "\n";
  }
  return out.str();
}

}  // namespace spinlab
