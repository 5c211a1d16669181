#pragma once

#include <complex>
#include <string>
#include <vector>

#include <lapacke.h>

#include "gapcount/errors.hpp"

namespace gapcount {

// Eigenvalues of a real symmetric matrix, full storage, lower triangle referenced.
// Destroys a.
inline std::vector<double> sym_eigenvalues(std::vector<double>& a, int n) {
    if (static_cast<int>(a.size()) < n * n) throw ConfigError("sym_eigenvalues: storage too small");
    std::vector<double> w(n);
    lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
    if (info != 0)
        throw NumericsError("dsyevd failed, info=" + std::to_string(info));
    return w;
}

// Eigenvalues of a complex Hermitian matrix, column-major, lower triangle referenced.
// Destroys a.
inline std::vector<double> herm_eigenvalues(std::vector<std::complex<double>>& a, int n) {
    if (static_cast<int>(a.size()) < n * n) throw ConfigError("herm_eigenvalues: storage too small");
    std::vector<double> w(n);
    lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n,
                                     reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
    if (info != 0)
        throw NumericsError("zheevd failed, info=" + std::to_string(info));
    return w;
}

}  // namespace gapcount
