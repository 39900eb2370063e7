#ifndef QCOMBPASS_UNITS_HPP
#define QCOMBPASS_UNITS_HPP

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qcombpass {

enum class Dimension { Dimensionless, Length, Area, Time, Frequency, Angle };

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline const std::map<std::string, double, std::less<>>& unit_table(Dimension dim) {
  static const std::map<std::string, double, std::less<>> none{};
  static const std::map<std::string, double, std::less<>> length{
      {"m", 1.0}, {"km", 1e3}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}, {"pm", 1e-12}};
  static const std::map<std::string, double, std::less<>> area{
      {"m2", 1.0}, {"m^2", 1.0}, {"cm2", 1e-4}, {"cm^2", 1e-4}, {"mm2", 1e-6}, {"mm^2", 1e-6}, {"km2", 1e6}, {"km^2", 1e6}};
  static const std::map<std::string, double, std::less<>> time{
      {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}, {"fs", 1e-15}};
  static const std::map<std::string, double, std::less<>> freq{
      {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"THz", 1e12}};
  static const std::map<std::string, double, std::less<>> angle{
      {"rad", 1.0}, {"deg", std::numbers::pi / 180.0}, {"pi", std::numbers::pi}};
  switch (dim) {
    case Dimension::Length: return length;
    case Dimension::Area: return area;
    case Dimension::Time: return time;
    case Dimension::Frequency: return freq;
    case Dimension::Angle: return angle;
    default: return none;
  }
}

inline double parse_number(std::string_view s, std::string_view original) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("cannot parse number from '" + std::string(original) + "'");
  return v;
}

}  // namespace detail

// Parses "1560nm", "250 MHz", "100km", "pi/2", "0.5pi", "90deg", "1e-13".
// Values without a suffix are taken in SI base units (radians for angles).
inline double parse_quantity(std::string_view text, Dimension dim) {
  const std::string_view original = text;
  std::string_view s = detail::trim(text);
  if (s.empty()) throw std::invalid_argument("empty value");

  if (dim == Dimension::Angle) {
    const auto pos = s.find("pi");
    if (pos != std::string_view::npos) {
      std::string_view head = detail::trim(s.substr(0, pos));
      std::string_view tail = detail::trim(s.substr(pos + 2));
      if (!head.empty() && head.back() == '*') head = detail::trim(head.substr(0, head.size() - 1));
      double factor = 1.0;
      if (head == "-") factor = -1.0;
      else if (head == "+" || head.empty()) factor = 1.0;
      else factor = detail::parse_number(head, original);
      double divisor = 1.0;
      if (!tail.empty()) {
        if (tail.front() != '/') throw std::invalid_argument("cannot parse angle '" + std::string(original) + "'");
        divisor = detail::parse_number(tail.substr(1), original);
        if (divisor == 0.0) throw std::invalid_argument("division by zero in '" + std::string(original) + "'");
      }
      return factor * std::numbers::pi / divisor;
    }
  }

  const std::string buf(s);
  char* end = nullptr;
  const double value = std::strtod(buf.c_str(), &end);
  if (end == buf.c_str()) throw std::invalid_argument("cannot parse number from '" + std::string(original) + "'");
  const std::string_view unit = detail::trim(std::string_view(buf).substr(static_cast<std::size_t>(end - buf.c_str())));
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value '" + std::string(original) + "'");
  if (unit.empty()) return value;
  const auto& table = detail::unit_table(dim);
  auto it = table.find(unit);
  if (it == table.end())
    throw std::invalid_argument("unknown unit '" + std::string(unit) + "' in '" + std::string(original) + "'");
  return value * it->second;
}

// Shortest round-trippable decimal form.
inline std::string format_exact(double v) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace qcombpass

#endif  // QCOMBPASS_UNITS_HPP
