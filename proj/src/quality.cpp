#include "colloc/quality.hpp"

#include "colloc/error.hpp"
#include "text_util.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace colloc {

const char* to_string(QualityCharacteristic c) {
    switch (c) {
    case QualityCharacteristic::completeness: return "completeness";
    case QualityCharacteristic::accuracy: return "accuracy";
    case QualityCharacteristic::reliability: return "reliability";
    case QualityCharacteristic::timeliness: return "timeliness";
    case QualityCharacteristic::consistency: return "consistency";
    }
    return "?";
}

std::optional<QualityCharacteristic> parse_characteristic(std::string_view text) {
    auto t = detail::lower(detail::trim(text));
    for (auto c : kAllCharacteristics)
        if (t == to_string(c)) return c;
    return std::nullopt;
}

std::optional<double> parse_fraction(std::string_view text) {
    auto t = std::string(detail::trim(text));
    bool percent = false;
    if (!t.empty() && t.back() == '%') {
        percent = true;
        t.pop_back();
        t = std::string(detail::trim(t));
    }
    if (t.empty()) return std::nullopt;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v)) return std::nullopt;
    if (percent) v /= 100.0;
    if (!is_fraction(v)) return std::nullopt;
    return v;
}

void validate(const QualityRange& range) {
    if (!std::isfinite(range.min) || !std::isfinite(range.max) || range.min < 0.0 || range.max > 1.0 ||
        range.min > range.max) {
        std::ostringstream msg;
        msg << "quality range must satisfy 0 <= min <= max <= 1 (got min=" << range.min << ", max=" << range.max
            << ")";
        throw InvalidQuery("invalid_range", msg.str());
    }
}

} // namespace colloc
