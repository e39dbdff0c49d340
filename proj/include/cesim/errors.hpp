#pragma once

#include <stdexcept>
#include <string>

namespace cesim {

struct NotHermitian : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IncompleteKrausSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BasisMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InconsistentCoefficients : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NegativeChoiEigenvalue : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpectrumOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonUnitaryComposite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cesim
