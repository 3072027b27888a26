#include "wiretap/lattice.hpp"

#include "wiretap/enumeration.hpp"
#include "wiretap/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace wiretap {

namespace {

constexpr double kIntegralityTolerance = 1e-9;
constexpr double kSymmetryTolerance = 1e-12;
constexpr double kRankTolerance = 1e-12;

IntMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto s = static_cast<Eigen::Index>(rows.begin()->size());
  IntMatrix m(n, s);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (int v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Generator matrices as printed; basis vectors are the columns.
const std::map<std::string, IntMatrix, std::less<>>& fixed_catalog() {
  static const std::map<std::string, IntMatrix, std::less<>> table = [] {
    std::map<std::string, IntMatrix, std::less<>> t;
    const IntMatrix d4 = from_rows({{-1, 1, 0, 0},
                                    {-1, -1, 1, 0},
                                    {0, 0, -1, 1},
                                    {0, 0, 0, -1}});
    t["D4"] = d4;
    t["Lambda1"] = from_rows({{4, 0}, {0, 4}});
    t["Lambda2"] = from_rows({{1, 0}, {0, 16}});
    t["Pi1"] = 2 * d4;
    t["Pi2"] = from_rows({{2, 0, -2, -2},
                          {3, -5, -2, 3},
                          {-4, 8, 4, -4},
                          {-6, 5, 0, -7}});
    t["Omega1"] = from_rows({{16, 0, 0, 0},
                             {0, 4, 0, 0},
                             {0, 0, 2, 0},
                             {0, 0, 0, 2}});
    t["Omega2"] = 4 * IntMatrix::Identity(4, 4);
    t["Omega3"] = from_rows({{-2, -3, 4, -1},
                             {0, -1, 0, 3},
                             {0, -3, -2, -3},
                             {-4, -1, 0, -1}});
    t["Gamma1"] = from_rows({{-1, 1, 2, 2},
                             {-1, 0, 2, -5},
                             {1, -2, 5, -1},
                             {-1, -5, 1, 2}});
    t["Gamma2"] = from_rows({{1, 1, 3, -2},
                             {-4, 1, 0, -4},
                             {-1, -2, 3, 1},
                             {2, -4, 2, -1}});
    return t;
  }();
  return table;
}

std::optional<int> parse_integer_lattice_name(std::string_view name) {
  if (name.size() < 2 || name.front() != 'Z') return std::nullopt;
  int n = 0;
  const auto* first = name.data() + 1;
  const auto* last = name.data() + name.size();
  auto [ptr, ec] = std::from_chars(first, last, n);
  if (ec != std::errc{} || ptr != last || n < 1) return std::nullopt;
  return n;
}

}  // namespace

Lattice::Lattice(Matrix basis) : basis_(std::move(basis)) {
  if (basis_.rows() == 0 || basis_.cols() == 0)
    throw InputError("lattice basis must be non-empty");
  if (basis_.cols() > basis_.rows())
    throw InputError("lattice rank exceeds its dimension");
  if (!basis_.allFinite()) throw InputError("lattice basis has non-finite entries");
  // Hadamard ratio det(G) / prod(G_ii) is 1 for orthogonal columns and 0
  // for dependent ones, independent of scale.
  const Matrix g = basis_.transpose() * basis_;
  const Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success || !(g.diagonal().minCoeff() > 0.0))
    throw InputError("lattice basis columns are linearly dependent");
  double log_ratio = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    log_ratio += 2.0 * std::log(llt.matrixL()(i, i)) - std::log(g(i, i));
  if (!(log_ratio > 2.0 * std::log(kRankTolerance)))
    throw InputError("lattice basis columns are linearly dependent");
}

Vector Lattice::point(const IntVector& coefficients) const {
  return basis_ * coefficients.cast<double>();
}

GramForm::GramForm(Matrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() == 0 || gram_.rows() != gram_.cols())
    throw InputError("Gram matrix must be square and non-empty");
  if (!gram_.allFinite()) throw InputError("Gram matrix has non-finite entries");
  const double scale = std::max(gram_.cwiseAbs().maxCoeff(), 1e-300);
  if ((gram_ - gram_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale)
    throw InputError("Gram matrix is not symmetric");
  gram_ = 0.5 * (gram_ + gram_.transpose()).eval();
  Eigen::LLT<Matrix> llt(gram_);
  if (llt.info() != Eigen::Success) throw InputError("Gram matrix is not positive definite");
  const Matrix l = llt.matrixL();
  if ((l.diagonal().array() <= 0.0).any())
    throw InputError("Gram matrix is not positive definite");
}

double GramForm::determinant() const {
  Eigen::LLT<Matrix> llt(gram_);
  const Matrix l = llt.matrixL();
  const double d = l.diagonal().prod();
  return d * d;
}

double GramForm::norm(const Vector& coefficients) const {
  return coefficients.dot(gram_ * coefficients);
}

GramForm GramForm::inverse() const {
  Eigen::LLT<Matrix> llt(gram_);
  return GramForm(llt.solve(Matrix::Identity(rank(), rank())));
}

GramForm GramForm::scaled(double factor) const {
  if (!(factor > 0.0)) throw InputError("Gram scale factor must be positive");
  return GramForm(factor * gram_);
}

GramForm gram(const Lattice& lattice) {
  return GramForm(lattice.basis().transpose() * lattice.basis());
}

double volume(const Lattice& lattice) {
  if (lattice.is_full()) return std::abs(lattice.basis().determinant());
  return gram(lattice).volume();
}

Lattice dual(const Lattice& lattice) {
  if (!lattice.is_full()) throw InputError("dual lattice requires a full lattice");
  return Lattice(lattice.basis().inverse().transpose());
}

Lattice scaled(const Lattice& lattice, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw InputError("lattice scale factor must be positive");
  return Lattice(factor * lattice.basis());
}

SublatticeIndex index_of_sublattice(const Lattice& sub, const Lattice& super) {
  if (sub.dimension() != super.dimension() || sub.rank() != super.rank())
    throw InputError("sublattice index needs equal dimension and rank");
  const Matrix x = super.basis().colPivHouseholderQr().solve(sub.basis());
  const double residual = (super.basis() * x - sub.basis()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, sub.basis().cwiseAbs().maxCoeff());
  if (residual > kIntegralityTolerance * scale)
    throw InputError("not a sublattice: columns leave the span of the superlattice");
  IntMatrix transition(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double r = std::round(x(i, j));
      if (std::abs(x(i, j) - r) > kIntegralityTolerance)
        throw InputError("not a sublattice: transition matrix is not integral");
      transition(i, j) = static_cast<std::int64_t>(r);
    }
  }
  const double det = std::abs(transition.cast<double>().determinant());
  const auto index = static_cast<std::int64_t>(std::llround(det));
  if (index < 1) throw InputError("not a sublattice: singular transition matrix");
  return {index, transition};
}

Lattice apply_fading(const Lattice& lattice, const Matrix& h) {
  if (h.cols() != lattice.dimension())
    throw InputError("fading matrix must have as many columns as the lattice dimension");
  if (!h.allFinite()) throw InputError("fading matrix has non-finite entries");
  return Lattice(h * lattice.basis());
}

IntMatrix catalog_basis(std::string_view name) {
  if (auto n = parse_integer_lattice_name(name)) return IntMatrix::Identity(*n, *n);
  const auto& table = fixed_catalog();
  auto it = table.find(name);
  if (it == table.end()) throw InputError("unknown catalog lattice: " + std::string(name));
  return it->second;
}

Lattice catalog(std::string_view name) {
  return Lattice(catalog_basis(name).cast<double>());
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "Z2",     "Z4",     "D4",     "Lambda1", "Lambda2", "Pi1",
      "Pi2",    "Omega1", "Omega2", "Omega3",  "Gamma1",  "Gamma2"};
  return names;
}

Lattice parse_lattice_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  long n = 0;
  long s = 0;
  if (!(in >> n >> s) || n < 1 || s < 1)
    throw InputError("lattice file must start with positive \"n s\"");
  Matrix basis(n, s);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < s; ++j) {
      if (!(in >> basis(i, j)))
        throw InputError("lattice file has fewer than n*s entries");
    }
  }
  std::string extra;
  if (in >> extra) throw InputError("lattice file has trailing content");
  return Lattice(std::move(basis));
}

Lattice read_lattice_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lattice file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_lattice_text(buffer.str());
}

std::string format_lattice_text(const Lattice& lattice) {
  std::ostringstream out;
  out.precision(17);
  out << lattice.dimension() << ' ' << lattice.rank() << '\n';
  for (int i = 0; i < lattice.dimension(); ++i) {
    for (int j = 0; j < lattice.rank(); ++j) {
      if (j) out << ' ';
      out << lattice.basis()(i, j);
    }
    out << '\n';
  }
  return out.str();
}

Lattice load_lattice(std::string_view name_or_path) {
  if (parse_integer_lattice_name(name_or_path) ||
      fixed_catalog().count(name_or_path) > 0)
    return catalog(name_or_path);
  return read_lattice_file(std::filesystem::path(std::string(name_or_path)));
}

LatticeSummary summarize(const Lattice& lattice) {
  const GramForm g = gram(lattice);
  const auto minimum = minimal_norm(g);
  return {minimum.value, minimum.kissing, is_well_rounded(g), volume(lattice),
          std::nullopt};
}

LatticeSummary summarize(const Lattice& lattice, const Lattice& ambient) {
  LatticeSummary summary = summarize(lattice);
  summary.index = index_of_sublattice(lattice, ambient).index;
  return summary;
}

}  // namespace wiretap
