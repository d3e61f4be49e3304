#include "cubquad/system.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "cubquad/error.hpp"

namespace cubquad {

DiagonalSystem::DiagonalSystem(std::vector<std::int64_t> a, std::vector<std::int64_t> b,
                               std::vector<std::int64_t> c, std::vector<std::int64_t> d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if (a_.size() != b_.size())
    throw InvalidInput("a and b must have equal length (got " + std::to_string(a_.size()) + " and " +
                       std::to_string(b_.size()) + ")");
  if (s() == 0) throw InvalidInput("empty system");
  for (const auto* v : {&a_, &b_, &c_, &d_}) {
    for (std::int64_t x : *v) {
      if (x == 0) throw InvalidInput("zero coefficient");
      if (x == INT64_MIN) throw InvalidInput("coefficient out of range");
      t_ = std::max(t_, x < 0 ? -x : x);
    }
  }
}

std::int64_t DiagonalSystem::cubic_coef(std::size_t i) const {
  if (i < l()) return a_[i];
  if (i < l() + m()) return c_[i - l()];
  return 0;
}

std::int64_t DiagonalSystem::quad_coef(std::size_t i) const {
  if (i < l()) return b_[i];
  if (i < l() + m()) return 0;
  return d_[i - l() - m()];
}

__int128 DiagonalSystem::theta(std::span<const std::int64_t> v) const {
  __int128 acc = 0;
  for (std::size_t i = 0; i < l() + m(); ++i) {
    const __int128 x = v[i];
    acc += static_cast<__int128>(cubic_coef(i)) * x * x * x;
  }
  return acc;
}

__int128 DiagonalSystem::phi(std::span<const std::int64_t> v) const {
  __int128 acc = 0;
  for (std::size_t i = 0; i < s(); ++i) {
    if (i >= l() && i < l() + m()) continue;
    const __int128 x = v[i];
    acc += static_cast<__int128>(quad_coef(i)) * x * x;
  }
  return acc;
}

double DiagonalSystem::theta(std::span<const double> v) const {
  double acc = 0;
  for (std::size_t i = 0; i < l() + m(); ++i) acc += static_cast<double>(cubic_coef(i)) * v[i] * v[i] * v[i];
  return acc;
}

double DiagonalSystem::phi(std::span<const double> v) const {
  double acc = 0;
  for (std::size_t i = 0; i < s(); ++i) acc += static_cast<double>(quad_coef(i)) * v[i] * v[i];
  return acc;
}

DiagonalSystem DiagonalSystem::with_sign_flips(std::span<const int> flips) const {
  if (flips.size() != s()) throw InvalidInput("flip vector length must equal s");
  auto a = a_;
  auto c = c_;
  for (std::size_t i = 0; i < l(); ++i)
    if (flips[i] < 0) a[i] = -a[i];
  for (std::size_t j = 0; j < m(); ++j)
    if (flips[l() + j] < 0) c[j] = -c[j];
  return DiagonalSystem(std::move(a), b_, std::move(c), d_);
}

std::string_view to_string(SystemClass tag) {
  switch (tag) {
    case SystemClass::A: return "A";
    case SystemClass::B: return "B";
    case SystemClass::C: return "C";
    case SystemClass::Unclassified: return "Unclassified";
  }
  return "?";
}

SystemClass classify(std::size_t m, std::size_t n) {
  if (m >= 6 || n >= 4) return SystemClass::Unclassified;
  if ((m == 0 && n == 0) || n == 1 || n == 2) return SystemClass::A;
  if (m >= 1 && (n == 0 || n == 3)) return SystemClass::B;
  return SystemClass::C;  // m == 0, n == 3
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::int64_t> parse_array(const std::string& key, std::string body, int line_no) {
  body = trim(body);
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') throw InvalidInput("line " + std::to_string(line_no) + ": unbalanced bracket");
    body = body.substr(1, body.size() - 2);
  }
  std::replace(body.begin(), body.end(), ',', ' ');
  std::vector<std::int64_t> out;
  std::istringstream in(body);
  std::string tok;
  while (in >> tok) {
    std::int64_t v = 0;
    const char* first = tok.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw InvalidInput("line " + std::to_string(line_no) + ": bad integer '" + tok + "' in " + key);
    out.push_back(v);
  }
  return out;
}

}  // namespace

DiagonalSystem parse_system(std::string_view text) {
  std::map<std::string, std::vector<std::int64_t>> arrays;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw InvalidInput("line " + std::to_string(line_no) + ": expected key = values");
    const std::string key = trim(std::string_view(content).substr(0, eq));
    if (key != "a" && key != "b" && key != "c" && key != "d")
      throw InvalidInput("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (arrays.count(key)) throw InvalidInput("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    arrays[key] = parse_array(key, content.substr(eq + 1), line_no);
  }
  if (!arrays.count("a") || !arrays.count("b")) throw InvalidInput("system document must define a and b");
  return DiagonalSystem(arrays["a"], arrays["b"], arrays["c"], arrays["d"]);
}

DiagonalSystem load_system(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("cannot open system document: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_system(buf.str());
}

std::string format_system(const DiagonalSystem& sys) {
  std::ostringstream out;
  auto emit = [&](char key, const std::vector<std::int64_t>& v) {
    out << key << " =";
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : " ") << v[i];
    out << '\n';
  };
  emit('a', sys.a());
  emit('b', sys.b());
  emit('c', sys.c());
  emit('d', sys.d());
  return out.str();
}

DiagonalSystem balanced_sample_system() {
  return DiagonalSystem({1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1},
                        {1, -1, -1, 1, 1, -1, -1, 1, 1, -1, 1}, {}, {});
}

}  // namespace cubquad
