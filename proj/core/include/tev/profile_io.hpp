#pragma once

#include <string>

#include "tev/profile.hpp"

namespace tev {

// Profile file format: one JSON object
//   {
//     "regularity": "piecewise_constant" | "piecewise_c2" | "c2" | "c11",
//     "bounds": {"n_star": <num>, "n_star_upper": <num>},
//     "segments": [
//       {"start": <num>, "end": <num>,
//        "law": {"kind": "constant"|"affine"|"polynomial", "coefficients": [...]}},
//       ...
//     ]
//   }
// Affine coefficients are [a, b] meaning a + b*r; polynomial coefficients
// ascend in r. Overlapping or gapped segments are rejected.
RefractiveProfile parse_profile(const std::string& json_text);
RefractiveProfile load_profile(const std::string& path);
std::string profile_to_json(const RefractiveProfile& p);

}  // namespace tev
