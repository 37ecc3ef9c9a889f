#ifndef LPDO_REPORT_HPP
#define LPDO_REPORT_HPP

#include <string>

#include <json.hpp>

namespace lpdo {

// Reports are ordered JSON trees; insertion order is the canonical key
// order, so both serializations are byte-stable across runs.
using Report = nlohmann::ordered_json;

std::string report_to_text(const Report& r);
std::string report_to_json(const Report& r);

}  // namespace lpdo

#endif
