#include "tev/textio.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace tev {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::complex<double> parse_complex(const std::string& s) {
    // accepted forms: "1.5", "2i", "1+2i", "1-2i", "-1.5e-3+0.25i"
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw std::invalid_argument("empty complex literal");
    if (t.back() != 'i' && t.back() != 'I') {
        std::size_t pos = 0;
        const double re = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument("bad complex literal: " + s);
        return {re, 0.0};
    }
    t.pop_back();  // strip i
    if (t.empty() || t == "+") return {0.0, 1.0};
    if (t == "-") return {0.0, -1.0};
    // find the sign splitting re and im (skip leading sign and exponent signs)
    std::size_t split = std::string::npos;
    for (std::size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) {
        std::size_t pos = 0;
        const double im = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument("bad complex literal: " + s);
        return {0.0, im};
    }
    std::size_t pos = 0;
    const double re = std::stod(t.substr(0, split), &pos);
    if (pos != split) throw std::invalid_argument("bad complex literal: " + s);
    std::string imtxt = t.substr(split);
    if (imtxt == "+") imtxt = "1";
    if (imtxt == "-") imtxt = "-1";
    const double im = std::stod(imtxt, &pos);
    return {re, im};
}

std::string complex_to_string(std::complex<double> z) {
    std::string out = fmt17(z.real());
    out += (z.imag() < 0 ? "-" : "+");
    out += fmt17(std::abs(z.imag()));
    out += "i";
    return out;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out.good()) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace tev
