// Shared helpers for the test binaries.

#pragma once

#include "rabicat/linalg.hpp"
#include "rabicat/warnings.hpp"

#include <string>
#include <vector>

namespace rabicat::test {

// Captures warnings for the lifetime of the object.
class WarningCapture {
public:
    WarningCapture()
        : previous_(set_warning_sink([this](const std::string& m) { messages.push_back(m); })) {}
    ~WarningCapture() { set_warning_sink(previous_); }
    WarningCapture(const WarningCapture&) = delete;
    WarningCapture& operator=(const WarningCapture&) = delete;

    std::vector<std::string> messages;

private:
    WarningSink previous_;
};

inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// exp(A) by a plain Taylor series with scaling and squaring; independent of
// the library's Pade path.
inline CMatrix taylor_expm(const CMatrix& a) {
    int squarings = 0;
    double n = a.cwiseAbs().rowwise().sum().maxCoeff();
    while (n > 0.5) {
        n *= 0.5;
        ++squarings;
    }
    const CMatrix s = a / std::pow(2.0, squarings);
    CMatrix term = CMatrix::Identity(a.rows(), a.cols());
    CMatrix sum = term;
    for (int k = 1; k < 40; ++k) {
        term = term * s / static_cast<double>(k);
        sum += term;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

} // namespace rabicat::test
