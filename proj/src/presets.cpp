#include "degenlab/presets.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dgl {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<double> numbers(std::istringstream& is, const std::string& text) {
  std::vector<double> v;
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    double x;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw std::invalid_argument("preset '" + text + "': bad number '" + tok + "'");
    v.push_back(x);
  }
  return v;
}

void arity(const std::string& text, const std::vector<double>& a, std::size_t lo, std::size_t hi) {
  if (a.size() < lo || a.size() > hi)
    throw std::invalid_argument("preset '" + text + "': wrong number of arguments");
}

}  // namespace

Preset parse_preset(const std::string& raw, int n) {
  std::istringstream is(raw);
  std::string name;
  if (!(is >> name)) throw std::invalid_argument("empty function preset");
  const auto a = numbers(is, raw);
  Preset P;
  P.text = raw;
  const std::size_t un = static_cast<std::size_t>(n);
  if (name == "const") {
    arity(raw, a, 1, 1);
    const double c = a[0];
    P.zero = c == 0.0;
    P.fn = [c](Point, double) { return c; };
  } else if (name == "linear") {
    arity(raw, a, 1 + un, 1 + un);
    P.fn = [a, n](Point x, double) {
      double v = a[0];
      for (int k = 0; k < n; ++k) v += a[1 + k] * x[k];
      return v;
    };
  } else if (name == "pwlinear") {
    arity(raw, a, 1 + 2 * un, 1 + 2 * un);
    P.fn = [a, n](Point x, double) {
      double v = a[0];
      for (int k = 0; k < n; ++k) v += a[1 + k] * x[k] + a[1 + n + k] * std::abs(x[k] - 0.5);
      return v;
    };
  } else if (name == "sine") {
    arity(raw, a, 1, 3);
    const double amp = a[0], freq = a.size() > 1 ? a[1] : 1.0, phase = a.size() > 2 ? a[2] : 0.0;
    P.zero = amp == 0.0;
    P.fn = [=](Point x, double) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += x[k];
      return amp * std::sin(M_PI * freq * s + phase);
    };
  } else if (name == "wave") {
    arity(raw, a, 1, 2);
    const double amp = a[0], freq = a.size() > 1 ? a[1] : 1.0;
    P.zero = amp == 0.0;
    P.fn = [=](Point x, double) { return amp * std::sin(2.0 * M_PI * freq * (x[0] - 0.5)); };
  } else if (name == "gauss") {
    if (a.size() != 2 && a.size() != 2 + un)
      throw std::invalid_argument("preset '" + raw + "': wrong number of arguments");
    const double amp = a[0], w = a[1];
    if (!(w > 0.0)) throw std::invalid_argument("preset '" + raw + "': width must be positive");
    std::vector<double> c(un, 0.5);
    if (a.size() > 2) c.assign(a.begin() + 2, a.end());
    P.zero = amp == 0.0;
    P.fn = [=](Point x, double) {
      double d2 = 0.0;
      for (int k = 0; k < n; ++k) d2 += (x[k] - c[k]) * (x[k] - c[k]);
      return amp * std::exp(-d2 / (2.0 * w * w));
    };
  } else if (name == "one_plus_norm") {
    arity(raw, a, 0, 0);
    P.fn = [n](Point x, double) {
      double d2 = 0.0;
      for (int k = 0; k < n; ++k) d2 += x[k] * x[k];
      return 1.0 + std::sqrt(d2);
    };
  } else {
    throw std::invalid_argument("unknown function preset '" + name + "'");
  }
  return P;
}

std::vector<Preset> parse_vector_preset(const std::string& text, int n, int N) {
  const auto parts = split(text, ';');
  std::vector<Preset> out;
  if (parts.size() == 1) {
    // One preset shared by every component.
    for (int i = 0; i < N; ++i) out.push_back(parse_preset(parts[0], n));
    return out;
  }
  if (static_cast<int>(parts.size()) != N)
    throw std::invalid_argument("'" + text + "' has " + std::to_string(parts.size()) +
                                " components, expected " + std::to_string(N));
  for (const auto& p : parts) out.push_back(parse_preset(p, n));
  return out;
}

}  // namespace dgl
