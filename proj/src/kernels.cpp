#include "gbt/kernels.hpp"

namespace gbt {

Csr transpose(const Csr& A) {
    Csr T;
    T.rows = A.cols;
    T.cols = A.rows;
    T.ptr.assign(T.rows + 1, 0);
    for (std::uint32_t c : A.idx) ++T.ptr[c + 1];
    for (std::size_t r = 0; r < T.rows; ++r) T.ptr[r + 1] += T.ptr[r];
    T.idx.resize(A.nnz());
    T.val.resize(A.nnz());
    std::vector<std::size_t> fill(T.ptr.begin(), T.ptr.end() - 1);
    for (std::size_t r = 0; r < A.rows; ++r) {
        for (std::size_t p = A.ptr[r]; p < A.ptr[r + 1]; ++p) {
            const std::size_t q = fill[A.idx[p]]++;
            T.idx[q] = static_cast<std::uint32_t>(r);
            T.val[q] = A.val[p];
        }
    }
    return T;
}

namespace serial {

void csr_apply(const Csr& A, const double* x, double* y) {
    for (std::size_t r = 0; r < A.rows; ++r) {
        double acc = 0.0;
        for (std::size_t p = A.ptr[r]; p < A.ptr[r + 1]; ++p) acc += A.val[p] * x[A.idx[p]];
        y[r] = acc;
    }
}

}  // namespace serial

namespace omp {

void csr_apply(const Csr& A, const double* x, double* y) {
    const auto rows = static_cast<std::ptrdiff_t>(A.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        double acc = 0.0;
        for (std::size_t p = A.ptr[r]; p < A.ptr[r + 1]; ++p) acc += A.val[p] * x[A.idx[p]];
        y[r] = acc;
    }
}

}  // namespace omp

}  // namespace gbt
