#pragma once

#include <complex>
#include <string>

namespace tev {

// 17 significant digits, '.' decimal point -- enough to round-trip a double,
// so reruns produce byte-identical artifacts.
std::string fmt17(double v);

// "a+bi" / "a-bi" literal used by the CLI for complex wavenumbers.
std::complex<double> parse_complex(const std::string& s);
std::string complex_to_string(std::complex<double> z);

// Write via temp file in the same directory, then rename into place.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace tev
