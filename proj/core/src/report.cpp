#include "cpwqed/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace cpwqed {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc{}) throw std::runtime_error("format_number: to_chars failed");
    return std::string(buf, res.ptr);
}

void Report::add(std::string key, double value) { entries_.emplace_back(std::move(key), format_number(value)); }

void Report::add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }

void Report::add(std::string key, long long value) {
    entries_.emplace_back(std::move(key), std::to_string(value));
}

void Report::add(std::string key, bool value) { entries_.emplace_back(std::move(key), value ? "true" : "false"); }

void Report::append(const Report& other, std::string_view prefix) {
    for (const auto& [k, v] : other.entries_) entries_.emplace_back(std::string(prefix) + k, v);
}

std::optional<std::string> Report::find(std::string_view key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    return std::nullopt;
}

double Report::number(std::string_view key) const {
    const auto v = find(key);
    if (!v) throw std::out_of_range("Report: no key '" + std::string(key) + "'");
    if (*v == "nan") return std::nan("");
    if (*v == "inf") return INFINITY;
    if (*v == "-inf") return -INFINITY;
    double out = 0.0;
    const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    if (res.ec != std::errc{}) throw std::out_of_range("Report: key '" + std::string(key) + "' is not numeric");
    return out;
}

void Report::write(std::ostream& out) const {
    for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
}

std::string Report::str() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

}  // namespace cpwqed
