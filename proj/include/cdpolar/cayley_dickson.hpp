#pragma once

/** \file
 * Cayley-Dickson algebras over the reals: elements of dimension 2^n with
 * the recursive doubling product, conjugation, norm and exponential map.
 *
 * The multiplication convention is the doubling rule
 *   (a, b) * (c, d) = (a*c - conj(d)*b, d*a + b*conj(c))
 * with real multiplication as the base case. Under it e1*e2 = e3,
 * e2*e3 = e1, e3*e1 = e2 and e4*e5 = e1.
 */

#include <Eigen/Dense>

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <utility>

namespace cdpolar {

/** An element of the n-th Cayley-Dickson algebra (n = dim_log), stored as a
 * flat coefficient vector of length 2^n. Coefficient k multiplies the basis
 * unit e_k, with e_0 = 1. Values are immutable after construction. */
template <typename Scalar = double>
class CdElement {
 public:
  using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  /// The real number 0 (dimension 1).
  CdElement() : coeffs_(VectorType::Zero(1)) {}

  /// Wraps a coefficient vector; its length must be a power of two.
  explicit CdElement(VectorType coeffs) : coeffs_(std::move(coeffs)) {
    const auto n = coeffs_.size();
    if (n < 1 || (n & (n - 1)) != 0) {
      throw std::invalid_argument("CdElement: coefficient count must be a power of two");
    }
  }

  CdElement(std::initializer_list<Scalar> coeffs)
      : CdElement(VectorType(Eigen::Map<const VectorType>(coeffs.begin(),
                                                          static_cast<Eigen::Index>(coeffs.size())))) {}

  static CdElement zero(int dim_log) { return CdElement(VectorType::Zero(Eigen::Index{1} << dim_log)); }

  static CdElement one(int dim_log) { return from_real(Scalar(1), dim_log); }

  static CdElement from_real(Scalar value, int dim_log) {
    VectorType v = VectorType::Zero(Eigen::Index{1} << dim_log);
    v[0] = value;
    return CdElement(std::move(v));
  }

  /// Basis unit e_k in the algebra of dimension 2^dim_log.
  static CdElement unit(int dim_log, Eigen::Index k) {
    VectorType v = VectorType::Zero(Eigen::Index{1} << dim_log);
    v[k] = Scalar(1);
    return CdElement(std::move(v));
  }

  int dim_log() const {
    int n = 0;
    while ((Eigen::Index{1} << n) < coeffs_.size()) ++n;
    return n;
  }

  Eigen::Index dim() const { return coeffs_.size(); }
  const VectorType& coeffs() const { return coeffs_; }
  Scalar operator[](Eigen::Index k) const { return coeffs_[k]; }

  friend bool operator==(const CdElement& x, const CdElement& y) { return x.coeffs_ == y.coeffs_; }
  friend bool operator!=(const CdElement& x, const CdElement& y) { return !(x == y); }

 private:
  VectorType coeffs_;
};

namespace detail {

template <typename Derived>
inline void require_same_dim(const Eigen::MatrixBase<Derived>& x, const Eigen::MatrixBase<Derived>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("CdElement: dimension mismatch");
  }
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> conj_vec(const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& v) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> r = -v;
  r[0] = v[0];
  return r;
}

// Recursive doubling product on raw coefficient vectors.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mul_vec(const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& x,
                                                 const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& y) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = x.size();
  if (n == 1) {
    Vec r(1);
    r[0] = x[0] * y[0];
    return r;
  }
  const Eigen::Index h = n / 2;
  const Vec a = x.head(h), b = x.tail(h);
  const Vec c = y.head(h), d = y.tail(h);
  Vec r(n);
  r.head(h) = mul_vec<Scalar>(a, c) - mul_vec<Scalar>(conj_vec<Scalar>(d), b);
  r.tail(h) = mul_vec<Scalar>(d, a) + mul_vec<Scalar>(b, conj_vec<Scalar>(c));
  return r;
}

}  // namespace detail

template <typename Scalar>
CdElement<Scalar> operator+(const CdElement<Scalar>& x, const CdElement<Scalar>& y) {
  detail::require_same_dim(x.coeffs(), y.coeffs());
  return CdElement<Scalar>(x.coeffs() + y.coeffs());
}

template <typename Scalar>
CdElement<Scalar> operator-(const CdElement<Scalar>& x, const CdElement<Scalar>& y) {
  detail::require_same_dim(x.coeffs(), y.coeffs());
  return CdElement<Scalar>(x.coeffs() - y.coeffs());
}

template <typename Scalar>
CdElement<Scalar> operator-(const CdElement<Scalar>& x) {
  return CdElement<Scalar>(-x.coeffs());
}

template <typename Scalar>
CdElement<Scalar> operator*(Scalar s, const CdElement<Scalar>& x) {
  return CdElement<Scalar>(s * x.coeffs());
}

template <typename Scalar>
CdElement<Scalar> operator*(const CdElement<Scalar>& x, Scalar s) {
  return s * x;
}

template <typename Scalar>
CdElement<Scalar> operator/(const CdElement<Scalar>& x, Scalar s) {
  return CdElement<Scalar>(x.coeffs() / s);
}

/// Cayley-Dickson product. Both operands must have the same dimension.
template <typename Scalar>
CdElement<Scalar> cd_mul(const CdElement<Scalar>& x, const CdElement<Scalar>& y) {
  detail::require_same_dim(x.coeffs(), y.coeffs());
  return CdElement<Scalar>(detail::mul_vec<Scalar>(x.coeffs(), y.coeffs()));
}

template <typename Scalar>
CdElement<Scalar> operator*(const CdElement<Scalar>& x, const CdElement<Scalar>& y) {
  return cd_mul(x, y);
}

/// Conjugate: coefficient 0 kept, all imaginary coefficients negated.
template <typename Scalar>
CdElement<Scalar> conjugate(const CdElement<Scalar>& x) {
  typename CdElement<Scalar>::VectorType v = -x.coeffs();
  v[0] = x.coeffs()[0];
  return CdElement<Scalar>(std::move(v));
}

/// Euclidean norm of the coefficient vector, equal to sqrt(Re(x * conj(x))).
template <typename Scalar>
Scalar norm(const CdElement<Scalar>& x) {
  return x.coeffs().norm();
}

template <typename Scalar>
Scalar real_part(const CdElement<Scalar>& x) {
  return x.coeffs()[0];
}

/// x with its real coefficient zeroed, so that x = real_part(x) + imag_part(x).
template <typename Scalar>
CdElement<Scalar> imag_part(const CdElement<Scalar>& x) {
  typename CdElement<Scalar>::VectorType v = x.coeffs();
  v[0] = Scalar(0);
  return CdElement<Scalar>(std::move(v));
}

/** Closed-form exponential e^x = e^{Re x} (cos|v| + (v/|v|) sin|v|) with
 * v = imag_part(x). The |v| -> 0 limit uses the series of sin(|v|)/|v|. */
template <typename Scalar>
CdElement<Scalar> exp_closed(const CdElement<Scalar>& x) {
  using std::cos;
  using std::exp;
  using std::sin;
  typename CdElement<Scalar>::VectorType v = x.coeffs();
  v[0] = Scalar(0);
  const Scalar m = v.norm();
  const Scalar scale = exp(x.coeffs()[0]);
  Scalar sinc;  // sin(m)/m
  if (m < Scalar(1e-6)) {
    const Scalar m2 = m * m;
    sinc = Scalar(1) - m2 / Scalar(6) + m2 * m2 / Scalar(120);
  } else {
    sinc = sin(m) / m;
  }
  v *= scale * sinc;
  v[0] = scale * cos(m);
  return CdElement<Scalar>(std::move(v));
}

/** Power-series exponential: partial sums of sum_k x^k / k!, truncated once
 * the term norm drops below tol. Powers of a single element live in a
 * commutative associative subalgebra, so the iteration term <- term*x/k is
 * unambiguous. */
template <typename Scalar>
CdElement<Scalar> exp_series(const CdElement<Scalar>& x, Scalar tol) {
  if (!(tol > Scalar(0))) {
    throw std::invalid_argument("exp_series: tol must be positive");
  }
  CdElement<Scalar> term = CdElement<Scalar>::one(x.dim_log());
  CdElement<Scalar> sum = term;
  constexpr int kMaxTerms = 512;
  for (int k = 1; k <= kMaxTerms; ++k) {
    term = cd_mul(term, x) / Scalar(k);
    sum = sum + term;
    if (norm(term) < tol) break;
  }
  return sum;
}

/** (cos a, sin a) recovered through the hypercomplex identities
 * cos a = (e^{mu a} + e^{-mu a})/2 and sin a = (e^{mu a} - e^{-mu a})/(2 mu),
 * for a unit pure-imaginary axis mu. */
template <typename Scalar>
std::pair<Scalar, Scalar> trig_from_exp(const CdElement<Scalar>& mu, Scalar alpha) {
  using std::abs;
  if (abs(norm(mu) - Scalar(1)) > Scalar(1e-12) || abs(real_part(mu)) > Scalar(1e-12)) {
    throw std::invalid_argument("trig_from_exp: axis must be unit and pure imaginary");
  }
  const CdElement<Scalar> ep = exp_closed(alpha * mu);
  const CdElement<Scalar> em = exp_closed(-alpha * mu);
  const Scalar cos_a = real_part(Scalar(0.5) * (ep + em));
  // 1/mu = -mu for unit pure mu, so (1/(2 mu)) z = -mu z / 2.
  const Scalar sin_a = real_part(cd_mul(-mu, ep - em) / Scalar(2));
  return {cos_a, sin_a};
}

}  // namespace cdpolar
