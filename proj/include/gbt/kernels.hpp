#pragma once

// Numerical kernels in two flavours: `serial` is the reference and `omp`
// the OpenMP version. Both follow the same blocking and reduction order, so
// their results agree bit for bit for any thread count.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gbt {

enum class Backend { Serial, Parallel };

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Compressed sparse rows.
struct Csr {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> ptr;
    std::vector<std::uint32_t> idx;
    std::vector<double> val;

    std::size_t nnz() const noexcept { return val.size(); }
};

Csr transpose(const Csr& A);

/// Sums of products for K observable pairs (X_k(n), Y_k) over lags n = 0..L-1.
/// Y is assumed already centred by its mean.
struct LaggedMoments {
    std::size_t pairs = 0;
    std::size_t lags = 0;
    std::size_t count = 0;
    // [(k * lags + n) * 4 + m] with m = 0: X Y, 1: X, 2: X^2 Y^2, 3: X Y^2
    std::vector<double> lagged;
    // [k * 2 + m] with m = 0: Y, 1: Y^2
    std::vector<double> plain;

    LaggedMoments() = default;
    LaggedMoments(std::size_t k, std::size_t l)
        : pairs(k), lags(l), lagged(k * l * 4, 0.0), plain(k * 2, 0.0) {}

    double& at(std::size_t k, std::size_t n, std::size_t m) { return lagged[(k * lags + n) * 4 + m]; }
    double at(std::size_t k, std::size_t n, std::size_t m) const {
        return lagged[(k * lags + n) * 4 + m];
    }

    void merge(const LaggedMoments& o) {
        count += o.count;
        for (std::size_t i = 0; i < lagged.size(); ++i) lagged[i] += o.lagged[i];
        for (std::size_t i = 0; i < plain.size(); ++i) plain[i] += o.plain[i];
    }
};

inline constexpr std::size_t kSampleBlock = 16384;

namespace detail {

template <class Sampler>
void accumulate_block(std::size_t begin, std::size_t end, const Sampler& sample, LaggedMoments& acc,
                      std::vector<double>& X, std::vector<double>& Y) {
    const std::size_t K = acc.pairs;
    const std::size_t L = acc.lags;
    for (std::size_t i = begin; i < end; ++i) {
        sample(i, X.data(), Y.data());
        for (std::size_t k = 0; k < K; ++k) {
            const double y = Y[k];
            const double y2 = y * y;
            acc.plain[k * 2] += y;
            acc.plain[k * 2 + 1] += y2;
            const double* xk = X.data() + k * L;
            double* out = acc.lagged.data() + k * L * 4;
            for (std::size_t n = 0; n < L; ++n) {
                const double x = xk[n];
                out[n * 4 + 0] += x * y;
                out[n * 4 + 1] += x;
                out[n * 4 + 2] += x * x * y2;
                out[n * 4 + 3] += x * y2;
            }
        }
    }
    acc.count += end - begin;
}

inline LaggedMoments pairwise_reduce(std::vector<LaggedMoments>& parts, std::size_t lo,
                                     std::size_t hi) {
    if (hi - lo == 1) return std::move(parts[lo]);
    const std::size_t mid = lo + (hi - lo) / 2;
    LaggedMoments left = pairwise_reduce(parts, lo, mid);
    left.merge(pairwise_reduce(parts, mid, hi));
    return left;
}

}  // namespace detail

namespace serial {

void csr_apply(const Csr& A, const double* x, double* y);

/// `sample(i, X, Y)` fills X[k * lags + n] and Y[k] for sample i.
template <class Sampler>
LaggedMoments accumulate_lagged(std::size_t n_samples, std::size_t pairs, std::size_t lags,
                                const Sampler& sample) {
    const std::size_t blocks = (n_samples + kSampleBlock - 1) / kSampleBlock;
    if (blocks == 0) return LaggedMoments(pairs, lags);
    std::vector<LaggedMoments> parts(blocks);
    std::vector<double> X(pairs * lags);
    std::vector<double> Y(pairs);
    for (std::size_t b = 0; b < blocks; ++b) {
        parts[b] = LaggedMoments(pairs, lags);
        const std::size_t begin = b * kSampleBlock;
        detail::accumulate_block(begin, std::min(n_samples, begin + kSampleBlock), sample, parts[b],
                                 X, Y);
    }
    return detail::pairwise_reduce(parts, 0, blocks);
}

/// Builds a matrix row by row where `row(r, idx, val)` writes at most `cap`
/// entries and returns how many it wrote.
template <class RowFn>
Csr build_rows(std::size_t rows, std::size_t cols, std::size_t cap, const RowFn& row) {
    std::vector<std::uint32_t> idx(rows * cap);
    std::vector<double> val(rows * cap);
    std::vector<std::size_t> count(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        count[r] = row(r, idx.data() + r * cap, val.data() + r * cap);
    }
    Csr A;
    A.rows = rows;
    A.cols = cols;
    A.ptr.assign(rows + 1, 0);
    for (std::size_t r = 0; r < rows; ++r) A.ptr[r + 1] = A.ptr[r] + count[r];
    A.idx.resize(A.ptr[rows]);
    A.val.resize(A.ptr[rows]);
    for (std::size_t r = 0; r < rows; ++r) {
        std::copy_n(idx.begin() + r * cap, count[r], A.idx.begin() + A.ptr[r]);
        std::copy_n(val.begin() + r * cap, count[r], A.val.begin() + A.ptr[r]);
    }
    return A;
}

}  // namespace serial

namespace omp {

void csr_apply(const Csr& A, const double* x, double* y);

template <class Sampler>
LaggedMoments accumulate_lagged(std::size_t n_samples, std::size_t pairs, std::size_t lags,
                                const Sampler& sample) {
    const std::size_t blocks = (n_samples + kSampleBlock - 1) / kSampleBlock;
    if (blocks == 0) return LaggedMoments(pairs, lags);
    std::vector<LaggedMoments> parts(blocks);
#pragma omp parallel
    {
        std::vector<double> X(pairs * lags);
        std::vector<double> Y(pairs);
#pragma omp for schedule(dynamic, 1)
        for (std::size_t b = 0; b < blocks; ++b) {
            parts[b] = LaggedMoments(pairs, lags);
            const std::size_t begin = b * kSampleBlock;
            detail::accumulate_block(begin, std::min(n_samples, begin + kSampleBlock), sample,
                                     parts[b], X, Y);
        }
    }
    return detail::pairwise_reduce(parts, 0, blocks);
}

template <class RowFn>
Csr build_rows(std::size_t rows, std::size_t cols, std::size_t cap, const RowFn& row) {
    std::vector<std::uint32_t> idx(rows * cap);
    std::vector<double> val(rows * cap);
    std::vector<std::size_t> count(rows);
#pragma omp parallel for schedule(static)
    for (std::size_t r = 0; r < rows; ++r) {
        count[r] = row(r, idx.data() + r * cap, val.data() + r * cap);
    }
    Csr A;
    A.rows = rows;
    A.cols = cols;
    A.ptr.assign(rows + 1, 0);
    for (std::size_t r = 0; r < rows; ++r) A.ptr[r + 1] = A.ptr[r] + count[r];
    A.idx.resize(A.ptr[rows]);
    A.val.resize(A.ptr[rows]);
#pragma omp parallel for schedule(static)
    for (std::size_t r = 0; r < rows; ++r) {
        std::copy_n(idx.begin() + r * cap, count[r], A.idx.begin() + A.ptr[r]);
        std::copy_n(val.begin() + r * cap, count[r], A.val.begin() + A.ptr[r]);
    }
    return A;
}

}  // namespace omp

inline void csr_apply(Backend b, const Csr& A, const double* x, double* y) {
    if (b == Backend::Serial) serial::csr_apply(A, x, y);
    else omp::csr_apply(A, x, y);
}

template <class Sampler>
LaggedMoments accumulate_lagged(Backend b, std::size_t n_samples, std::size_t pairs,
                                std::size_t lags, const Sampler& sample) {
    if (b == Backend::Serial) return serial::accumulate_lagged(n_samples, pairs, lags, sample);
    return omp::accumulate_lagged(n_samples, pairs, lags, sample);
}

}  // namespace gbt
