#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace colloc {

// The fixed quality model. Order here is the canonical column/serialization
// order.
enum class QualityCharacteristic { completeness, accuracy, reliability, timeliness, consistency };

inline constexpr std::array<QualityCharacteristic, 5> kAllCharacteristics{
    QualityCharacteristic::completeness, QualityCharacteristic::accuracy, QualityCharacteristic::reliability,
    QualityCharacteristic::timeliness, QualityCharacteristic::consistency};

const char* to_string(QualityCharacteristic c);
std::optional<QualityCharacteristic> parse_characteristic(std::string_view text);

// At most one value per characteristic; every value is a fraction in [0,1].
using QualityMap = std::map<QualityCharacteristic, double>;

struct QualityValue {
    QualityCharacteristic characteristic = QualityCharacteristic::completeness;
    double value = 0.0;

    bool operator==(const QualityValue&) const = default;
};

inline bool is_fraction(double v) { return v >= 0.0 && v <= 1.0; }

// "0.85" -> 0.85, "85%" -> 0.85. Returns nullopt for non-numbers and for
// values outside [0,1] after normalization.
std::optional<double> parse_fraction(std::string_view text);

// Inclusive range on one characteristic.
struct QualityRange {
    QualityCharacteristic characteristic = QualityCharacteristic::completeness;
    double min = 0.0;
    double max = 1.0;

    bool contains(double v) const { return v >= min && v <= max; }
};

// Throws InvalidQuery("invalid_range") unless 0 <= min <= max <= 1.
void validate(const QualityRange& range);

} // namespace colloc
