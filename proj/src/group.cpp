#include "vsi/group.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace vsi {

namespace {

constexpr Complex I{0.0, 1.0};
const double kPi = std::numbers::pi;

Matrix rot2(double theta) {
  Matrix m(2, 2);
  m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return m;
}

// Reflection of (x, y) across the line at angle alpha.
Matrix mirror2(double alpha) {
  Matrix m(2, 2);
  m << std::cos(2 * alpha), std::sin(2 * alpha), std::sin(2 * alpha),
      -std::cos(2 * alpha);
  return m;
}

// Spin-1/2 rotation about z by theta.
Matrix spin_rot(double theta) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::exp(-I * theta / 2.0);
  m(1, 1) = std::exp(I * theta / 2.0);
  return m;
}

// Spin-1/2 reflection through the vertical plane whose mirror line lies
// at angle alpha: pi rotation about the in-plane normal n = (-sin a, cos a).
Matrix spin_mirror(double alpha) {
  const double nx = -std::sin(alpha), ny = std::cos(alpha);
  Matrix m(2, 2);
  m << 0.0, Complex(-ny, -nx), Complex(ny, -nx), 0.0;
  return m;
}

std::array<double, 6> mirror_angles() {
  return {0.0, kPi / 3.0, 2.0 * kPi / 3.0};
}

Rep build_e12() {
  Rep r;
  r.dim = 2;
  r.d[0] = Matrix::Identity(2, 2);
  r.d[1] = spin_rot(2 * kPi / 3);
  r.d[2] = spin_rot(4 * kPi / 3);
  r.d[3] = spin_mirror(0.0);
  r.d[4] = spin_mirror(kPi / 3);
  r.d[5] = spin_mirror(2 * kPi / 3);
  for (int i = 0; i < 6; ++i) r.d[i + 6] = -r.d[i];
  return r;
}

Rep build_vector_rep(const std::array<Matrix, 6>& single) {
  Rep r;
  r.dim = static_cast<int>(single[0].rows());
  for (int i = 0; i < 6; ++i) {
    r.d[i] = single[i];
    r.d[i + 6] = single[i];
  }
  return r;
}

Rep build_a1() {
  std::array<Matrix, 6> s;
  for (auto& m : s) m = Matrix::Identity(1, 1);
  return build_vector_rep(s);
}

Rep build_a2() {
  std::array<Matrix, 6> s;
  for (int i = 0; i < 6; ++i) {
    s[i] = Matrix::Identity(1, 1);
    if (i >= 3) s[i](0, 0) = -1.0;
  }
  return build_vector_rep(s);
}

Rep build_e() {
  std::array<Matrix, 6> s;
  s[0] = rot2(0.0);
  s[1] = rot2(2 * kPi / 3);
  s[2] = rot2(4 * kPi / 3);
  s[3] = mirror2(0.0);
  s[4] = mirror2(kPi / 3);
  s[5] = mirror2(2 * kPi / 3);
  return build_vector_rep(s);
}

// One-dimensional spinor irreps: D(C3) = -1 on both, D(sv1) = +i on
// 1E3/2 and -i on 2E3/2; barred elements flip the sign.
Rep build_e32(Complex sv1_value) {
  // derive the remaining values through the multiplication table of
  // the faithful spinor rep: sv2 = C3*sv1, sv3 = C3^2*sv1.
  Rep r;
  r.dim = 1;
  std::array<Complex, 6> v;
  v[0] = 1.0;
  v[1] = -1.0;
  v[2] = 1.0;
  v[3] = sv1_value;
  v[4] = v[1] * sv1_value;
  v[5] = v[2] * sv1_value;
  for (int i = 0; i < 6; ++i) {
    r.d[i] = Matrix::Constant(1, 1, v[i]);
    r.d[i + 6] = Matrix::Constant(1, 1, -v[i]);
  }
  return r;
}

const std::array<Rep, kNumIrreps>& all_irrep_reps() {
  static const std::array<Rep, kNumIrreps> reps = [] {
    std::array<Rep, kNumIrreps> a{build_a1(), build_a2(),       build_e(),
                                  build_e12(), build_e32(I),    build_e32(-I)};
    for (auto& r : a) r.validate(1e-12);
    return a;
  }();
  return reps;
}

// Multiplication table from the faithful E1/2 matrices.
const std::array<std::array<int, kGroupOrder>, kGroupOrder>& mul_table() {
  static const auto table = [] {
    std::array<std::array<int, kGroupOrder>, kGroupOrder> t{};
    const Rep e12 = build_e12();
    for (int g = 0; g < kGroupOrder; ++g) {
      for (int h = 0; h < kGroupOrder; ++h) {
        const Matrix prod = e12.d[g] * e12.d[h];
        int found = -1;
        for (int k = 0; k < kGroupOrder; ++k) {
          if ((prod - e12.d[k]).cwiseAbs().maxCoeff() < 1e-9) {
            found = k;
            break;
          }
        }
        if (found < 0) throw std::logic_error("group not closed");
        t[g][h] = found;
      }
    }
    return t;
  }();
  return table;
}

}  // namespace

const char* elem_name(Elem e) {
  static const char* names[kGroupOrder] = {"E",    "C3",    "C3^2",  "sv1",
                                           "sv2",  "sv3",   "~E",    "~C3",
                                           "~C3^2", "~sv1", "~sv2",  "~sv3"};
  return names[static_cast<int>(e)];
}

int multiply(int g, int h) { return mul_table()[g][h]; }

int inverse(int g) {
  for (int h = 0; h < kGroupOrder; ++h)
    if (multiply(g, h) == 0) return h;
  throw std::logic_error("no inverse");
}

const char* irrep_name(Irrep g) {
  static const char* names[kNumIrreps] = {"A1",   "A2",    "E",
                                          "E1/2", "1E3/2", "2E3/2"};
  return names[static_cast<int>(g)];
}

int irrep_dim(Irrep g) {
  static const int dims[kNumIrreps] = {1, 1, 2, 2, 1, 1};
  return dims[static_cast<int>(g)];
}

bool irrep_is_spinor(Irrep g) { return static_cast<int>(g) >= 3; }

Irrep irrep_from_name(const std::string& s) {
  for (int i = 0; i < kNumIrreps; ++i)
    if (s == irrep_name(static_cast<Irrep>(i))) return static_cast<Irrep>(i);
  throw std::invalid_argument("unknown irrep name: " + s);
}

void Rep::validate(double tol) {
  for (int g = 0; g < kGroupOrder; ++g) {
    if (d[g].rows() != dim || d[g].cols() != dim)
      throw std::runtime_error("representation matrix has wrong dimension");
  }
  for (int g = 0; g < kGroupOrder; ++g) {
    for (int h = 0; h < kGroupOrder; ++h) {
      const Matrix lhs = d[g] * d[h];
      const Matrix& rhs = d[multiply(g, h)];
      if ((lhs - rhs).cwiseAbs().maxCoeff() > tol)
        throw std::runtime_error(
            "carrier matrices violate the group multiplication table");
    }
  }
  validated = true;
}

const Rep& irrep_rep(Irrep g) { return all_irrep_reps()[static_cast<int>(g)]; }

Complex character(Irrep g, int elem) {
  return irrep_rep(g).d[elem].trace();
}

std::array<std::array<double, 3>, 3> character_table_single() {
  // rows A1, A2, E over classes {E, 2C3, 3sv}
  std::array<std::array<double, 3>, 3> t{};
  const Irrep rows[3] = {Irrep::A1, Irrep::A2, Irrep::E};
  const int reps_of_class[3] = {0, 1, 3};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      t[r][c] = character(rows[r], reps_of_class[c]).real();
  return t;
}

Rep product_rep(const Rep& a, const Rep& b) {
  Rep r;
  r.dim = a.dim * b.dim;
  for (int g = 0; g < kGroupOrder; ++g)
    r.d[g] = Eigen::kroneckerProduct(a.d[g], b.d[g]).eval();
  return r;
}

Matrix projector(const Rep& carrier, Irrep g, int k, int l) {
  if (!carrier.validated)
    throw std::runtime_error("projector: carrier representation not validated");
  const Rep& ir = irrep_rep(g);
  const int d = irrep_dim(g);
  if (k < 0 || k >= d || l < 0 || l >= d)
    throw std::invalid_argument("projector: row index out of range");
  Matrix p = Matrix::Zero(carrier.dim, carrier.dim);
  for (int r = 0; r < kGroupOrder; ++r)
    p += std::conj(ir.d[r](k, l)) * carrier.d[r];
  p *= static_cast<double>(d) / kGroupOrder;
  return p;
}

Matrix isotypic_projector(const Rep& carrier, Irrep g) {
  Matrix p = Matrix::Zero(carrier.dim, carrier.dim);
  for (int k = 0; k < irrep_dim(g); ++k) p += projector(carrier, g, k, k);
  return p;
}

std::map<Irrep, int> decompose(const Rep& carrier) {
  std::map<Irrep, int> out;
  for (int gi = 0; gi < kNumIrreps; ++gi) {
    const Irrep g = static_cast<Irrep>(gi);
    Complex acc = 0.0;
    for (int r = 0; r < kGroupOrder; ++r)
      acc += std::conj(character(g, r)) * carrier.d[r].trace();
    acc /= static_cast<double>(kGroupOrder);
    const double n = acc.real();
    if (std::abs(acc.imag()) > 1e-8 || std::abs(n - std::round(n)) > 1e-8)
      throw std::runtime_error("decompose: non-integer multiplicity");
    const int m = static_cast<int>(std::round(n));
    if (m != 0) out[g] = m;
  }
  return out;
}

int product_multiplicity(Irrep a, Irrep b, Irrep g) {
  Complex acc = 0.0;
  for (int r = 0; r < kGroupOrder; ++r)
    acc += character(a, r) * character(b, r) * std::conj(character(g, r));
  acc /= static_cast<double>(kGroupOrder);
  return static_cast<int>(std::round(acc.real()));
}

CgcTensor solve_cgc(Irrep a, Irrep b, Irrep g) {
  const int mult = product_multiplicity(a, b, g);
  if (mult == 0)
    throw std::runtime_error("solve_cgc: irrep not contained in product");

  Rep prod = product_rep(irrep_rep(a), irrep_rep(b));
  prod.validate(1e-10);
  const int dg = irrep_dim(g);
  const int da = irrep_dim(a), db = irrep_dim(b);

  // Coupled basis from the row-1 projector: an orthonormal basis of
  // range(P_11) gives the s-index, the transfer operators P_m1 fill the
  // remaining rows with the correct relative normalization.
  const Matrix p11 = projector(prod, g, 0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(p11);
  std::vector<Vector> seeds;
  for (int i = 0; i < p11.rows(); ++i) {
    if (std::abs(es.eigenvalues()(i) - 1.0) < 1e-8)
      seeds.push_back(es.eigenvectors().col(i));
  }
  if (static_cast<int>(seeds.size()) != mult)
    throw std::runtime_error("solve_cgc: projector rank disagrees with character count");

  CgcTensor t;
  t.a = a;
  t.b = b;
  t.g = g;
  t.mult = mult;
  t.coeff.resize(mult);
  for (int s = 0; s < mult; ++s) {
    std::vector<Vector> rows(dg);
    rows[0] = seeds[s];
    for (int m = 1; m < dg; ++m) rows[m] = projector(prod, g, m, 0) * seeds[s];

    // phase convention: first nonzero coefficient in (i, k, m) scan order
    // is made real positive.
    Complex phase = 0.0;
    for (int i = 0; i < da && phase == 0.0; ++i)
      for (int k = 0; k < db && phase == 0.0; ++k)
        for (int m = 0; m < dg && phase == 0.0; ++m) {
          const Complex c = rows[m](i * db + k);
          if (std::abs(c) > 1e-9) phase = std::abs(c) / c;
        }
    t.coeff[s].resize(dg);
    for (int m = 0; m < dg; ++m) {
      Matrix cm(da, db);
      for (int i = 0; i < da; ++i)
        for (int k = 0; k < db; ++k) cm(i, k) = phase * rows[m](i * db + k);
      t.coeff[s][m] = cm;
    }
  }
  return t;
}

Complex wigner_eckart_factor(Irrep op, int p, std::pair<Irrep, int> init,
                             std::pair<Irrep, int> fin) {
  const auto [gi, k] = init;
  const auto [gf, kp] = fin;
  if (product_multiplicity(gi, op, gf) == 0) return 0.0;
  const CgcTensor t = solve_cgc(gi, op, gf);
  if (t.mult != 1)
    throw std::runtime_error("wigner_eckart_factor: product has multiplicity > 1");
  return std::conj(t(0, k, p, kp));
}

bool selection_allowed(Irrep op, Irrep init, Irrep fin) {
  return product_multiplicity(init, op, fin) > 0;
}

}  // namespace vsi
