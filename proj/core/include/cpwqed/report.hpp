#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cpwqed {

/// Shortest decimal string that parses back to the same double; '.' separator,
/// independent of the global locale. "nan", "inf", "-inf" for non-finite values.
std::string format_number(double value);

/// Ordered `key = value` report.
class Report {
public:
    void add(std::string key, double value);
    void add(std::string key, std::string value);
    void add(std::string key, const char* value) { add(std::move(key), std::string(value)); }
    void add(std::string key, long long value);
    void add(std::string key, int value) { add(std::move(key), static_cast<long long>(value)); }
    void add(std::string key, std::size_t value) { add(std::move(key), static_cast<long long>(value)); }
    void add(std::string key, bool value);
    void append(const Report& other, std::string_view prefix = {});

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    std::optional<std::string> find(std::string_view key) const;
    /// Numeric lookup; throws std::out_of_range when absent.
    double number(std::string_view key) const;

    void write(std::ostream& out) const;
    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace cpwqed
