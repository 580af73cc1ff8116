#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lans {

inline constexpr std::size_t kMaxBandwidth = 3;

/// Square band matrix with kl sub- and ku super-diagonals.
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

    std::size_t size() const { return n_; }
    std::size_t lower_bandwidth() const { return kl_; }
    std::size_t upper_bandwidth() const { return ku_; }

    bool in_band(std::size_t i, std::size_t j) const {
        return j + kl_ >= i && j <= i + ku_;
    }
    /// Entry (i, j); must lie inside the band.
    double& at(std::size_t i, std::size_t j);
    /// Entry (i, j); zero outside the band.
    double operator()(std::size_t i, std::size_t j) const;

    /// Replaces row i by the identity row (Dirichlet pinning).
    void set_identity_row(std::size_t i);

    std::vector<double> multiply(std::span<const double> x) const;
    double norm_inf() const;

private:
    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;
    std::vector<double> band_; // row-major, (kl + ku + 1) entries per row
};

struct BandedSystem {
    BandedMatrix matrix;
    std::vector<double> rhs;
};

/// LU factorization with partial pivoting inside the band. The pivot order is
/// a deterministic function of the matrix. Throws SingularMatrix when a pivot
/// falls below 1e-14 * ||A||_inf.
class BandedLU {
public:
    explicit BandedLU(const BandedMatrix& a);

    std::size_t size() const { return n_; }
    std::vector<double> solve(std::span<const double> b) const;

private:
    std::size_t n_;
    std::size_t kl_;
    std::size_t ku_;
    std::size_t width_;                // kl + (ku + kl) + 1 stored per row
    std::vector<double> lu_;           // row-major working band
    std::vector<std::size_t> pivots_;
};

/// Solves A x = b for a banded system. Bandwidth must not exceed kMaxBandwidth.
std::vector<double> solve_banded(const BandedSystem& system);

} // namespace lans
