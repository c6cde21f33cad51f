#include "vsi/soc.hpp"

#include <cmath>
#include <stdexcept>

namespace vsi {

namespace {

const Complex kI(0.0, 1.0);

Matrix kron_orbital_spin(const Matrix& orb, const Matrix& spin) {
  Matrix m = Matrix::Zero(kNumSpinOrbitals, kNumSpinOrbitals);
  for (int o1 = 0; o1 < 4; ++o1)
    for (int o2 = 0; o2 < 4; ++o2)
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
          m(2 * o1 + s1, 2 * o2 + s2) = orb(o1, o2) * spin(s1, s2);
  return m;
}

Matrix pauli(int axis) {
  Matrix s(2, 2);
  switch (axis) {
    case 0: s << 0, 1, 1, 0; break;
    case 1: s << 0, -kI, kI, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

// In-plane angular momentum block between an A1 orbital w and the E pair:
// lx = -i|y><w| + i|w>... the axial pairing is (Lx, Ly) = (-gy, gx) with
// gx = i|w><x| - i|x><w| and gy its y twin, which keeps the full operator a
// double-group scalar.
std::pair<Matrix, Matrix> axial_pair(Orb w) {
  int iw = static_cast<int>(w);
  Matrix gx = Matrix::Zero(4, 4), gy = Matrix::Zero(4, 4);
  gx(iw, 0) = kI;
  gx(0, iw) = -kI;
  gy(iw, 1) = kI;
  gy(1, iw) = -kI;
  return {Matrix(-gy), Matrix(gx)};
}

// (e, v, u) occupation counts per configuration.
std::array<int, 3> orbital_content(Config c) {
  switch (c) {
    case Config::VE2: return {2, 1, 0};
    case Config::UE2: return {2, 0, 1};
    case Config::UVE: return {1, 1, 1};
    case Config::E3: return {3, 0, 0};
    case Config::V2E: return {1, 2, 0};
    case Config::U2E: return {1, 0, 2};
    case Config::U2V: return {0, 1, 2};
    case Config::UV2: return {0, 2, 1};
  }
  return {0, 0, 0};
}

}  // namespace

const char* soc_channel_name(SocChannel c) {
  switch (c) {
    case SocChannel::Par: return "par";
    case SocChannel::Perp1: return "perp1";
    case SocChannel::Perp2: return "perp2";
  }
  return "?";
}

std::optional<SocChannel> soc_pair_channel(Config a, Config b) {
  auto ca = orbital_content(a), cb = orbital_content(b);
  int de = cb[0] - ca[0], dv = cb[1] - ca[1], du = cb[2] - ca[2];
  if (de == 0 && dv == 0 && du == 0) return SocChannel::Par;
  if (std::abs(de) == 1 && dv == -de && du == 0) return SocChannel::Perp1;
  if (std::abs(de) == 1 && du == -de && dv == 0) return SocChannel::Perp2;
  return std::nullopt;
}

Matrix single_particle_channel(SocChannel ch) {
  if (ch == SocChannel::Par) {
    Matrix lz = Matrix::Zero(4, 4);
    lz(0, 1) = -kI;  // <x|lz|y> = -i
    lz(1, 0) = kI;
    return kron_orbital_spin(lz, pauli(2));
  }
  auto [lx, ly] = axial_pair(ch == SocChannel::Perp1 ? Orb::V : Orb::U);
  return kron_orbital_spin(lx, pauli(0)) + kron_orbital_spin(ly, pauli(1));
}

Matrix single_particle_soc(const SocParams& p) {
  return p.lambda_par * single_particle_channel(SocChannel::Par) +
         p.lambda_perp1 * single_particle_channel(SocChannel::Perp1) +
         p.lambda_perp2 * single_particle_channel(SocChannel::Perp2);
}

Matrix manybody_channel(const Catalog& cat, SocChannel ch) {
  return cat.to_catalog(lift_one_body(cat.basis(), single_particle_channel(ch)));
}

SocMatrix manybody_soc(const Catalog& cat, const SocParams& p) {
  SocMatrix m;
  m.channel[0] = manybody_channel(cat, SocChannel::Par);
  m.channel[1] = manybody_channel(cat, SocChannel::Perp1);
  m.channel[2] = manybody_channel(cat, SocChannel::Perp2);
  m.matrix = p.lambda_par * m.channel[0] + p.lambda_perp1 * m.channel[1] +
             p.lambda_perp2 * m.channel[2];
  for (const CatalogState& st : cat.states())
    m.families[st.family].push_back(cat.index_of(st.name));
  return m;
}

Matrix SocMatrix::block(const std::string& row_family,
                        const std::string& col_family) const {
  auto ri = families.find(row_family), ci = families.find(col_family);
  if (ri == families.end() || ci == families.end())
    throw std::invalid_argument("unknown family in block(): " + row_family +
                                "/" + col_family);
  Matrix b(ri->second.size(), ci->second.size());
  for (size_t i = 0; i < ri->second.size(); ++i)
    for (size_t j = 0; j < ci->second.size(); ++j)
      b(i, j) = matrix(ri->second[i], ci->second[j]);
  return b;
}

namespace detail {
void require_mixing(const Matrix& block, double tol) {
  double offdiag = 0;
  for (int i = 0; i < block.rows(); ++i)
    for (int j = 0; j < block.cols(); ++j)
      if (i != j) offdiag = std::max(offdiag, std::abs(block(i, j)));
  if (offdiag <= tol)
    throw std::runtime_error(
        "manifold block is already diagonal; nothing to mix");
}
}  // namespace detail

namespace {

// Catalog-basis vector from (state name, coefficient) terms.
Vector catalog_combo(const Catalog& cat,
                     const std::vector<std::pair<std::string, Complex>>& terms) {
  Vector v = Vector::Zero(kDetCount);
  for (const auto& [name, c] : terms) {
    int i = cat.index_of(name);
    if (i < 0) throw std::logic_error("unknown catalog state " + name);
    v(i) += c;
  }
  return v;
}

MixedState make_mixed(const Catalog& cat, const Matrix& h, std::string name,
                      const std::vector<std::pair<std::string, Complex>>& terms,
                      double split) {
  Vector amp = catalog_combo(cat, terms);
  amp /= amp.norm();
  double resid = (h * amp - split * amp).norm();
  if (resid > 1e-10)
    throw std::runtime_error("mixed state " + name +
                             " failed the eigenvector check");
  return {std::move(name), std::move(amp), split};
}

}  // namespace

MixedManifolds soc_mixed_manifolds(const Catalog& cat) {
  const double r2 = std::sqrt(0.5), s3 = std::sqrt(3.0);
  // the family-restricted block, embedded back in the 56-dim space so the
  // eigenvector check runs on catalog-basis amplitudes
  Matrix h = manybody_channel(cat, SocChannel::Par);
  auto family_restrict = [&](const std::string& fam) {
    auto idx = cat.family(fam);
    Matrix p = Matrix::Zero(kDetCount, kDetCount);
    for (int i : idx) p(i, i) = 1.0;
    return Matrix(p * h * p);
  };

  Matrix hq2 = family_restrict("q2");
  Matrix hd6 = family_restrict("d6");
  detail::require_mixing(hq2, 1e-10);
  detail::require_mixing(hd6, 1e-10);

  MixedManifolds out;
  out.q2.push_back(make_mixed(cat, hq2, "q2p_1",
                              {{"q2_2", r2}, {"q2_1", -kI * r2}}, 1.0));
  out.q2.push_back(make_mixed(cat, hq2, "q2p_2",
                              {{"q2_4", r2}, {"q2_3", kI * r2}}, 1.0));
  out.q2.push_back(make_mixed(cat, hq2, "q2p_3", {{"q2_7", 1.0}}, 1.0 / 3));
  out.q2.push_back(make_mixed(cat, hq2, "q2p_4", {{"q2_8", 1.0}}, 1.0 / 3));
  out.q2.push_back(make_mixed(cat, hq2, "q2p_5", {{"q2_5", 1.0}}, -1.0 / 3));
  out.q2.push_back(make_mixed(cat, hq2, "q2p_6", {{"q2_6", 1.0}}, -1.0 / 3));
  out.q2.push_back(make_mixed(cat, hq2, "q2p_7",
                              {{"q2_4", r2}, {"q2_3", -kI * r2}}, -1.0));
  out.q2.push_back(make_mixed(cat, hq2, "q2p_8",
                              {{"q2_2", r2}, {"q2_1", kI * r2}}, -1.0));

  // the historical second member of each d6 pair is the non-orthogonal
  // combination -(1/2) first + (sqrt3/2) second; the normalized sum and
  // difference with the first member are exactly the block eigenvectors
  out.d6.push_back(make_mixed(cat, hd6, "d6p_1",
                              {{"d6_1", -1.5}, {"d6_2", s3 / 2}}, -1.0));
  out.d6.push_back(make_mixed(cat, hd6, "d6p_2",
                              {{"d6_1", 0.5}, {"d6_2", s3 / 2}}, 1.0 / 3));
  out.d6.push_back(make_mixed(cat, hd6, "d6p_3",
                              {{"d6_3", -1.5}, {"d6_4", s3 / 2}}, -1.0));
  out.d6.push_back(make_mixed(cat, hd6, "d6p_4",
                              {{"d6_3", 0.5}, {"d6_4", s3 / 2}}, 1.0 / 3));
  return out;
}

// ====================== reference coupling table ======================

int SocTable::row_index(const std::string& name) const {
  for (size_t i = 0; i < row_names.size(); ++i)
    if (row_names[i] == name) return static_cast<int>(i);
  return -1;
}
int SocTable::col_index(const std::string& name) const {
  for (size_t i = 0; i < col_names.size(); ++i)
    if (col_names[i] == name) return static_cast<int>(i);
  return -1;
}
const TableEntry* SocTable::entry(int row, int col) const {
  for (const TableEntry& e : entries)
    if (e.row == row && e.col == col) return &e;
  return nullptr;
}

SocTable golden_soc_table(const Catalog& cat) {
  const double r2 = std::sqrt(0.5), s2 = std::sqrt(2.0), s3 = std::sqrt(3.0),
               s6 = std::sqrt(6.0);
  SocTable t;

  auto col = [&](const std::string& name, Config cfg,
                 const std::vector<std::pair<std::string, Complex>>& terms) {
    t.col_names.push_back(name);
    t.col_configs.push_back(cfg);
    t.col_states.push_back(catalog_combo(cat, terms));
  };
  for (int i = 1; i <= 4; ++i) {
    std::string n = "g_" + std::to_string(i);
    col(n, Config::VE2, {{n, 1.0}});
  }
  for (int i = 1; i <= 4; ++i) {
    std::string n = "q1_" + std::to_string(i);
    col(n, Config::UE2, {{n, 1.0}});
  }
  col("q2p_1", Config::UVE, {{"q2_2", r2}, {"q2_1", -kI * r2}});
  col("q2p_2", Config::UVE, {{"q2_4", r2}, {"q2_3", kI * r2}});
  col("q2p_3", Config::UVE, {{"q2_5", -r2}, {"q2_6", kI * r2}});
  col("q2p_4", Config::UVE, {{"q2_5", -r2}, {"q2_6", -kI * r2}});
  col("q2p_5", Config::UVE, {{"q2_7", -kI * r2}, {"q2_8", -kI * r2}});
  col("q2p_6", Config::UVE, {{"q2_7", r2}, {"q2_8", -r2}});
  col("q2p_7", Config::UVE, {{"q2_4", kI * r2}, {"q2_3", r2}});
  col("q2p_8", Config::UVE, {{"q2_2", -kI * r2}, {"q2_1", r2}});

  struct Cell {
    int col;
    Complex coeff;
    bool dagger = false;
    bool erratum = false;
  };
  auto row = [&](const std::string& name, Config cfg,
                 const std::vector<std::pair<std::string, Complex>>& terms,
                 double norm, const std::vector<Cell>& cells) {
    int r = static_cast<int>(t.row_names.size());
    t.row_names.push_back(name);
    t.row_configs.push_back(cfg);
    t.row_states.push_back(catalog_combo(cat, terms));
    t.row_norms.push_back(norm);
    for (const Cell& c : cells) {
      auto ch = soc_pair_channel(cfg, t.col_configs[c.col]);
      if (!ch) throw std::logic_error("reference entry in a forbidden cell");
      t.entries.push_back({r, c.col, c.coeff, *ch, c.dagger, c.erratum});
    }
  };

  // row states carry the phase that reproduces the reference entries
  row("d1_1", Config::E3, {{"d1_3", r2}, {"d1_4", r2}}, 1,
      {{0, -1}, {1, -1}, {4, -1}, {5, -1}});
  row("d1_2", Config::E3, {{"d1_3", kI * r2}, {"d1_4", -kI * r2}}, 1,
      {{0, kI}, {1, -kI}, {4, kI}, {5, -kI}});
  row("d1_3", Config::E3, {{"d1_1", r2}, {"d1_2", -kI * r2}}, 1,
      {{2, kI / s3}, {3, -1 / s3}, {6, kI / s3}, {7, -1 / s3}});
  row("d1_4", Config::E3, {{"d1_1", r2}, {"d1_2", kI * r2}}, 1,
      {{2, -kI / s3}, {3, -1 / s3}, {6, -kI / s3}, {7, -1 / s3}});

  row("d2_1", Config::VE2, {{"d2_1", -1.0}}, 1,
      {{10, kI / (3 * s2)}, {11, -kI / (3 * s2)}, {15, -kI / s3}});
  row("d2_2", Config::VE2, {{"d2_2", -1.0}}, 1,
      {{10, 1 / (3 * s2)}, {11, 1 / (3 * s2)}, {14, -kI / s3}});

  row("d3_1", Config::VE2, {{"d3_3", -kI * r2}, {"d3_4", -r2}}, 1,
      {{8, kI}, {9, 1}});
  row("d3_2", Config::VE2, {{"d3_3", kI * r2}, {"d3_4", -r2}}, 1,
      {{8, -kI}, {9, -1, false, true}});
  row("d3_3", Config::VE2, {{"d3_1", -kI * r2}, {"d3_2", -kI * r2}}, 1,
      {{13, s2 / s3}});
  row("d3_4", Config::VE2, {{"d3_1", r2}, {"d3_2", -r2}}, 1, {{12, -s2 / s3}});

  row("d4_1", Config::VE2, {{"d4_1", 1.0}}, 1,
      {{2, 4.0 * kI / s6}, {10, 1 / s6}, {11, -1 / s6}, {15, 1}});
  row("d4_2", Config::VE2, {{"d4_2", 1.0}}, 1,
      {{3, -4.0 * kI / s6}, {10, kI / s6}, {11, kI / s6}, {14, -1}});

  row("d5_1", Config::V2E, {{"d5_3", -kI * r2}, {"d5_4", -kI * r2}}, 1,
      {{0, -kI, true}, {1, -kI, true}});
  row("d5_2", Config::V2E, {{"d5_3", -r2}, {"d5_4", r2}}, 1,
      {{0, 1, true}, {1, -1, true}});
  row("d5_3", Config::V2E, {{"d5_1", -kI * r2}, {"d5_2", r2}}, 1,
      {{2, 1 / s3, true}, {3, kI / s3, true}});
  row("d5_4", Config::V2E, {{"d5_1", -kI * r2}, {"d5_2", -r2}}, 1,
      {{2, -1 / s3, true}, {3, kI / s3, true}});

  row("d6p_1", Config::UVE, {{"other_2", r2}, {"other_4", r2}}, std::sqrt(1.5),
      {{0, s3 / 2, true}, {1, s3 / 2, true}, {4, s3 / 2, true}, {5, s3 / 2, true}});
  row("d6p_2", Config::UVE, {{"other_1", -r2}, {"other_3", -r2}}, r2,
      {{0, -1 / (2 * s3), true},
       {1, -1 / (2 * s3), true},
       {4, 1 / (2 * s3), true},
       {5, 1 / (2 * s3), true},
       {12, 2.0 / 3}});
  row("d6p_3", Config::UVE, {{"other_2", kI * r2}, {"other_4", -kI * r2}},
      std::sqrt(1.5),
      {{0, -kI * s3 / 2.0, true},
       {1, kI * s3 / 2.0, true},
       {4, -kI * s3 / 2.0, true},
       {5, kI * s3 / 2.0, true}});
  row("d6p_4", Config::UVE, {{"other_1", -kI * r2}, {"other_3", kI * r2}}, r2,
      {{0, kI / (2 * s3), true},
       {1, -kI / (2 * s3), true},
       {4, -kI / (2 * s3), true},
       {5, kI / (2 * s3), true},
       {13, 2.0 / 3}});

  row("d7_1", Config::UE2, {{"d7_1", -1.0}}, 1,
      {{10, -kI / (3 * s2)}, {11, kI / (3 * s2)}, {15, kI / s3}});
  row("d7_2", Config::UE2, {{"d7_2", -1.0}}, 1,
      {{10, -1 / (3 * s2)}, {11, -1 / (3 * s2)}, {14, kI / s3}});

  row("d8_1", Config::UE2, {{"d8_3", -kI * r2}, {"d8_4", -r2}}, 1,
      {{8, -kI}, {9, -1}});
  row("d8_2", Config::UE2, {{"d8_3", kI * r2}, {"d8_4", -r2}}, 1,
      {{8, kI}, {9, 1, false, true}});
  row("d8_3", Config::UE2, {{"d8_1", -kI * r2}, {"d8_2", -kI * r2}}, 1,
      {{13, -s2 / s3}});
  row("d8_4", Config::UE2, {{"d8_1", r2}, {"d8_2", -r2}}, 1, {{12, s2 / s3}});

  row("d9_1", Config::UE2, {{"d9_1", 1.0}}, 1,
      {{6, 4.0 * kI / s6}, {10, -1 / s6}, {11, 1 / s6}, {15, -1}});
  row("d9_2", Config::UE2, {{"d9_2", 1.0}}, 1,
      {{7, -4.0 * kI / s6}, {10, -kI / s6}, {11, -kI / s6}, {14, 1}});

  return t;
}

namespace {
double channel_value(const SocParams& p, SocChannel ch) {
  switch (ch) {
    case SocChannel::Par: return p.lambda_par;
    case SocChannel::Perp1: return p.lambda_perp1;
    case SocChannel::Perp2: return p.lambda_perp2;
  }
  return 0;
}
}  // namespace

Matrix reference_soc_table(const SocTable& t, const SocParams& p) {
  Matrix m = Matrix::Zero(t.row_names.size(), t.col_names.size());
  for (const TableEntry& e : t.entries)
    m(e.row, e.col) = e.coeff * channel_value(p, e.channel);
  return m;
}

Matrix computed_soc_table(const Catalog& cat, const SocTable& t,
                          const SocParams& p) {
  std::array<Matrix, kNumSocChannels> h;
  for (int c = 0; c < kNumSocChannels; ++c)
    h[c] = manybody_channel(cat, static_cast<SocChannel>(c));

  Matrix m = Matrix::Zero(t.row_names.size(), t.col_names.size());
  for (size_t r = 0; r < t.row_names.size(); ++r) {
    for (size_t c = 0; c < t.col_names.size(); ++c) {
      auto ch = soc_pair_channel(t.row_configs[r], t.col_configs[c]);
      if (!ch) continue;  // no one-body path between the configurations
      Complex val = (t.row_states[r].adjoint() *
                     h[static_cast<int>(*ch)] * t.col_states[c])(0, 0);
      val *= t.row_norms[r] * channel_value(p, *ch);
      const TableEntry* e = t.entry(static_cast<int>(r), static_cast<int>(c));
      if (e && e->dagger) val *= kI;
      m(r, c) = val;
    }
  }
  return m;
}

}  // namespace vsi
