// Exact 2x2 Hermitian algebra and Bloch-vector conversions for a single qubit.
//
// Every Hermitian 2x2 matrix is stored as four complex entries but all spectral
// quantities are computed from its Pauli decomposition A = a0*I + a.sigma, whose
// eigenvalues are a0 +/- |a|. No general eigensolver is involved.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>

#include "qclass/errors.hpp"

namespace qclass {

/// Absolute tolerance for Hermiticity, trace and positivity checks.
inline constexpr double kStateTolerance = 1e-12;

using Complex = std::complex<double>;

/// Plain Euclidean 3-vector; no norm constraint.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    constexpr Vec3& operator*=(double s) {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::hypot(a.x, a.y, a.z); }

inline Vec3 normalized(const Vec3& a) {
    const double n = norm(a);
    if (!(n > 0.0)) throw PreconditionError("cannot normalize a zero vector");
    return a / n;
}

inline constexpr Vec3 kAxisX{1.0, 0.0, 0.0};
inline constexpr Vec3 kAxisY{0.0, 1.0, 0.0};
inline constexpr Vec3 kAxisZ{0.0, 0.0, 1.0};

/// Bloch vector of a qubit state; construction enforces |r| <= 1 + 1e-12.
class BlochVector {
public:
    constexpr BlochVector() = default;
    explicit BlochVector(const Vec3& r) : r_(r) {
        if (!std::isfinite(r.x) || !std::isfinite(r.y) || !std::isfinite(r.z))
            throw InvalidStateError("Bloch vector has non-finite components");
        if (norm(r) > 1.0 + kStateTolerance)
            throw InvalidStateError("Bloch vector norm " + std::to_string(norm(r)) + " exceeds 1");
    }
    BlochVector(double x, double y, double z) : BlochVector(Vec3{x, y, z}) {}

    constexpr const Vec3& vec() const { return r_; }
    constexpr double x() const { return r_.x; }
    constexpr double y() const { return r_.y; }
    constexpr double z() const { return r_.z; }
    double length() const { return norm(r_); }

private:
    Vec3 r_{};
};

/// Pauli coordinates (a0, a) of a 2x2 Hermitian matrix a0*I + a.sigma.
struct PauliDecomposition {
    double scalar = 0.0;
    Vec3 vector{};
};

using Matrix2 = std::array<Complex, 4>;  // row-major (00, 01, 10, 11)

inline Matrix2 matrix_from_pauli(const PauliDecomposition& p) {
    return {Complex{p.scalar + p.vector.z, 0.0}, Complex{p.vector.x, -p.vector.y},
            Complex{p.vector.x, p.vector.y}, Complex{p.scalar - p.vector.z, 0.0}};
}

/// Hermitian 2x2 operator; no trace or positivity constraint.
class HermitianOperator {
public:
    HermitianOperator() = default;
    explicit HermitianOperator(const Matrix2& m) : m_(m) {
        if (std::abs(m[0].imag()) > kStateTolerance || std::abs(m[3].imag()) > kStateTolerance ||
            std::abs(m[1] - std::conj(m[2])) > kStateTolerance)
            throw InvalidStateError("matrix is not Hermitian");
        m_[0] = Complex{m[0].real(), 0.0};
        m_[3] = Complex{m[3].real(), 0.0};
        m_[1] = std::conj(m_[2]);
    }
    explicit HermitianOperator(const PauliDecomposition& p) : m_(matrix_from_pauli(p)) {}

    static HermitianOperator identity(double scale = 1.0) { return HermitianOperator(PauliDecomposition{scale, {}}); }
    static HermitianOperator pauli(const Vec3& axis) { return HermitianOperator(PauliDecomposition{0.0, axis}); }

    const Matrix2& matrix() const { return m_; }
    Complex operator()(int row, int col) const { return m_[2 * row + col]; }

    PauliDecomposition pauli() const {
        return {0.5 * (m_[0].real() + m_[3].real()),
                {m_[2].real(), m_[2].imag(), 0.5 * (m_[0].real() - m_[3].real())}};
    }

    /// Eigenvalues in ascending order.
    std::array<double, 2> eigenvalues() const {
        const auto p = pauli();
        const double r = norm(p.vector);
        return {p.scalar - r, p.scalar + r};
    }

    double trace() const { return m_[0].real() + m_[3].real(); }

    friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
        const auto pa = a.pauli();
        const auto pb = b.pauli();
        return HermitianOperator(PauliDecomposition{pa.scalar + pb.scalar, pa.vector + pb.vector});
    }
    friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
        const auto pa = a.pauli();
        const auto pb = b.pauli();
        return HermitianOperator(PauliDecomposition{pa.scalar - pb.scalar, pa.vector - pb.vector});
    }
    friend HermitianOperator operator*(double s, const HermitianOperator& a) {
        const auto pa = a.pauli();
        return HermitianOperator(PauliDecomposition{s * pa.scalar, s * pa.vector});
    }

private:
    Matrix2 m_{};
};

/// Qubit density matrix: Hermitian, unit trace, eigenvalues >= -1e-12.
class DensityMatrix {
public:
    DensityMatrix() : DensityMatrix(Matrix2{Complex{0.5}, Complex{}, Complex{}, Complex{0.5}}) {}
    explicit DensityMatrix(const Matrix2& m) : op_(m) {
        if (std::abs(op_.trace() - 1.0) > kStateTolerance) throw InvalidStateError("density matrix trace is not 1");
        if (op_.eigenvalues()[0] < -kStateTolerance) throw InvalidStateError("density matrix is not positive");
    }

    const HermitianOperator& op() const { return op_; }
    const Matrix2& matrix() const { return op_.matrix(); }
    Complex operator()(int row, int col) const { return op_(row, col); }
    std::array<double, 2> eigenvalues() const { return op_.eigenvalues(); }

private:
    HermitianOperator op_;
};

/// Orthogonal projector on C^2. Rank 1 projectors are (I + p.sigma)/2 with |p| = 1.
class Projector {
public:
    static Projector zero() { return Projector(0, {}); }
    static Projector identity() { return Projector(2, {}); }
    static Projector rank_one(const Vec3& direction) {
        if (std::abs(norm(direction) - 1.0) > kStateTolerance)
            throw PreconditionError("rank-1 projector needs a unit Bloch vector");
        return Projector(1, direction);
    }

    int rank() const { return rank_; }
    /// Bloch vector; meaningful only for rank 1.
    const Vec3& bloch() const { return bloch_; }

    PauliDecomposition pauli() const {
        switch (rank_) {
            case 0: return {0.0, {}};
            case 2: return {1.0, {}};
            default: return {0.5, 0.5 * bloch_};
        }
    }
    HermitianOperator op() const { return HermitianOperator(pauli()); }
    Projector complement() const {
        if (rank_ == 1) return Projector(1, -bloch_);
        return Projector(2 - rank_, {});
    }

private:
    Projector(int rank, const Vec3& bloch) : rank_(rank), bloch_(bloch) {}

    int rank_ = 0;
    Vec3 bloch_{};
};

/// Tr[A B] from Pauli coordinates: 2 (a0 b0 + a.b).
inline double trace_product(const PauliDecomposition& a, const PauliDecomposition& b) {
    return 2.0 * (a.scalar * b.scalar + dot(a.vector, b.vector));
}

inline double trace_product(const HermitianOperator& a, const Projector& p) {
    return trace_product(a.pauli(), p.pauli());
}

inline double expectation(const DensityMatrix& rho, const Projector& p) { return trace_product(rho.op(), p); }

inline DensityMatrix bloch_to_density(const BlochVector& r) {
    return DensityMatrix(matrix_from_pauli({0.5, 0.5 * r.vec()}));
}

inline BlochVector density_to_bloch(const DensityMatrix& rho) {
    const auto p = rho.op().pauli();
    return BlochVector(2.0 * p.vector);
}

/// Projector onto the strictly positive eigenspace of A. Zero eigenvalues are
/// excluded, so A with eigenvalues {0, x>0} gives rank 1 and A = 0 gives rank 0.
inline Projector positive_eigenprojector(const HermitianOperator& a) {
    const auto p = a.pauli();
    const double r = norm(p.vector);
    if (p.scalar - r > 0.0) return Projector::identity();
    if (p.scalar + r > 0.0) return Projector::rank_one(p.vector / r);
    return Projector::zero();
}

inline double trace_norm(const HermitianOperator& a) {
    const auto ev = a.eigenvalues();
    return std::abs(ev[0]) + std::abs(ev[1]);
}

/// Single-shot measurement of the Pauli observable axis.sigma; returns +1 or -1
/// with P(+1) = (1 + r.axis)/2.
template <class Rng>
int sample_pauli(const BlochVector& r, const Vec3& axis, Rng& rng) {
    if (std::abs(norm(axis) - 1.0) > kStateTolerance) throw PreconditionError("measurement axis must be a unit vector");
    const double p_plus = 0.5 * (1.0 + dot(r.vec(), axis));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    return uniform(rng) < p_plus ? +1 : -1;
}

}  // namespace qclass
