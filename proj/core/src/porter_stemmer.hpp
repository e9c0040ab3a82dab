#pragma once

#include <string>

namespace pararank::detail {

/// Martin Porter's stemmer as in his reference C implementation (including
/// the "bli" -> "ble" and "logi" -> "log" departures). Stems in place.
void porter_stem(std::string& word);

}  // namespace pararank::detail
