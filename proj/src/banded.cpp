#include "lans/banded.hpp"

#include <algorithm>
#include <cmath>

#include "lans/error.hpp"

namespace lans {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), band_(n * (kl + ku + 1), 0.0) {}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_ || !in_band(i, j)) throw InvalidArgument("banded entry outside band");
    return band_[i * (kl_ + ku_ + 1) + (j + kl_ - i)];
}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_ || !in_band(i, j)) return 0.0;
    return band_[i * (kl_ + ku_ + 1) + (j + kl_ - i)];
}

void BandedMatrix::set_identity_row(std::size_t i) {
    const std::size_t w = kl_ + ku_ + 1;
    std::fill_n(band_.begin() + static_cast<std::ptrdiff_t>(i * w), w, 0.0);
    at(i, i) = 1.0;
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
    if (x.size() != n_) throw InvalidArgument("dimension mismatch in banded multiply");
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t lo = i > kl_ ? i - kl_ : 0;
        const std::size_t hi = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double BandedMatrix::norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t lo = i > kl_ ? i - kl_ : 0;
        const std::size_t hi = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

// Row i of the working band holds columns [i - kl, i + ku + kl]; the extra kl
// super-diagonals absorb fill-in from row interchanges.
BandedLU::BandedLU(const BandedMatrix& a)
    : n_(a.size()),
      kl_(a.lower_bandwidth()),
      ku_(a.upper_bandwidth()),
      width_(2 * a.lower_bandwidth() + a.upper_bandwidth() + 1),
      lu_(a.size() * width_, 0.0),
      pivots_(a.size(), 0) {
    auto cell = [this](std::size_t i, std::size_t j) -> double& {
        return lu_[i * width_ + (j + kl_ - i)];
    };
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t lo = i > kl_ ? i - kl_ : 0;
        const std::size_t hi = std::min(n_ - 1, i + ku_);
        for (std::size_t j = lo; j <= hi; ++j) cell(i, j) = a(i, j);
    }
    const double scale = a.norm_inf();
    const double tiny = 1e-14 * (scale > 0.0 ? scale : 1.0);

    for (std::size_t k = 0; k < n_; ++k) {
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        const std::size_t last_col = std::min(n_ - 1, k + ku_ + kl_);
        std::size_t p = k;
        double best = std::abs(cell(k, k));
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            if (std::abs(cell(i, k)) > best) {
                best = std::abs(cell(i, k));
                p = i;
            }
        }
        if (!(best > tiny)) throw SingularMatrix(k);
        pivots_[k] = p;
        if (p != k) {
            for (std::size_t j = k; j <= last_col; ++j) std::swap(cell(k, j), cell(p, j));
        }
        const double piv = cell(k, k);
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            const double l = cell(i, k) / piv;
            cell(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j <= last_col; ++j) cell(i, j) -= l * cell(k, j);
        }
    }
}

std::vector<double> BandedLU::solve(std::span<const double> b) const {
    if (b.size() != n_) throw InvalidArgument("dimension mismatch in banded solve");
    auto cell = [this](std::size_t i, std::size_t j) {
        return lu_[i * width_ + (j + kl_ - i)];
    };
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t k = 0; k < n_; ++k) {
        if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        for (std::size_t i = k + 1; i <= last_row; ++i) x[i] -= cell(i, k) * x[k];
    }
    for (std::size_t kk = n_; kk-- > 0;) {
        const std::size_t last_col = std::min(n_ - 1, kk + ku_ + kl_);
        double s = x[kk];
        for (std::size_t j = kk + 1; j <= last_col; ++j) s -= cell(kk, j) * x[j];
        x[kk] = s / cell(kk, kk);
    }
    return x;
}

std::vector<double> solve_banded(const BandedSystem& system) {
    const auto& a = system.matrix;
    if (a.lower_bandwidth() > kMaxBandwidth || a.upper_bandwidth() > kMaxBandwidth) {
        throw InvalidArgument("bandwidth exceeds 3");
    }
    if (system.rhs.size() != a.size()) throw InvalidArgument("right-hand side size mismatch");
    return BandedLU(a).solve(system.rhs);
}

} // namespace lans
