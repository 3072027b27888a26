#include "wiretap/coset_code.hpp"

#include "wiretap/errors.hpp"

#include <algorithm>
#include <cmath>

namespace wiretap {

namespace {

std::int64_t positive_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Mass beyond the table radius is below 2^-40 of the total.
const double kMassCutoff = std::ldexp(1.0, -40);

}  // namespace

NestedPair::NestedPair(Lattice fine, Lattice coarse)
    : fine_(std::move(fine)), coarse_(std::move(coarse)) {
  if (!fine_.is_full() || !coarse_.is_full())
    throw InputError("nested pair needs full lattices");
  auto nesting = index_of_sublattice(coarse_, fine_);
  transition_ = std::move(nesting.transition);
  index_ = nesting.index;
}

CosetCode::CosetCode(NestedPair pair)
    : pair_(std::move(pair)), smith_(smith_normal_form(pair_.transition())) {
  const auto s = static_cast<Eigen::Index>(pair_.fine().rank());
  const ClosestPointSolver coarse_solver(pair_.coarse());
  const Matrix& fine_basis = pair_.fine().basis();
  points_.reserve(static_cast<std::size_t>(size()));
  coefficients_.reserve(static_cast<std::size_t>(size()));

  IntVector digits = IntVector::Zero(s);
  for (std::int64_t id = 0; id < size(); ++id) {
    std::int64_t rest = id;
    for (Eigen::Index i = 0; i < s; ++i) {
      digits[i] = rest % smith_.diagonal[i];
      rest /= smith_.diagonal[i];
    }
    IntVector w = smith_.left_inverse * digits;
    const Vector raw = fine_basis * w.cast<double>();
    // Reduce into the Voronoi cell of the coarse lattice.
    const auto nearest = coarse_solver.solve(raw);
    w -= pair_.transition() * nearest.coefficients;
    coefficients_.push_back(w);
    points_.push_back(fine_basis * w.cast<double>());
  }

  for (std::int64_t id = 0; id < size(); ++id) {
    if (coset_of(coefficients_[static_cast<std::size_t>(id)]).id != id)
      throw InputError("coset representatives are not pairwise incongruent");
  }
}

void CosetCode::check(Message m) const {
  if (m.id < 0 || m.id >= size()) throw InputError("message id out of range");
}

const Vector& CosetCode::representative(Message m) const {
  check(m);
  return points_[static_cast<std::size_t>(m.id)];
}

const IntVector& CosetCode::representative_coefficients(Message m) const {
  check(m);
  return coefficients_[static_cast<std::size_t>(m.id)];
}

Message CosetCode::coset_of(const IntVector& fine_coefficients) const {
  const IntVector k = smith_.left * fine_coefficients;
  std::int64_t id = 0;
  std::int64_t radix = 1;
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    id += radix * positive_mod(k[i], smith_.diagonal[i]);
    radix *= smith_.diagonal[i];
  }
  return {id};
}

CosetCode coset_representatives(const NestedPair& pair) { return CosetCode(pair); }

DiscreteGaussianEncoder::DiscreteGaussianEncoder(const CosetCode& code,
                                                 ShapingParams shaping,
                                                 std::size_t max_table_size)
    : sigma_s_(shaping.sigma_s) {
  if (!(sigma_s_ > 0.0) || !std::isfinite(sigma_s_))
    throw InputError("shaping sigma must be positive");
  const Lattice& coarse = code.pair().coarse();
  const GramForm coarse_gram = gram(coarse);
  const ShortVectorEnumerator enumerator(coarse_gram);
  const Eigen::PartialPivLU<Matrix> coarse_lu(coarse.basis());
  const double decay = 1.0 / (2.0 * sigma_s_ * sigma_s_);

  tables_.reserve(static_cast<std::size_t>(code.size()));
  for (std::int64_t id = 0; id < code.size(); ++id) {
    const Vector& lambda = code.representative({id});
    // Points lambda + M z have squared length Q(z + u) with M u = lambda.
    const Vector u = coarse_lu.solve(lambda);
    std::vector<double> center(u.data(), u.data() + u.size());
    for (double& c : center) c = -c;
    // lambda lies in the Voronoi cell, so it is the shortest point of its
    // coset; weights are taken relative to it to avoid underflow.
    const double nearest = lambda.squaredNorm();

    double excess = 40.0 * std::log(2.0) + 10.0;
    while (true) {
      const double radius = nearest + excess / decay;
      Table table;
      std::vector<double> weights;
      double total = 0.0, shell = 0.0;
      bool overflow = false;
      enumerator.visit(radius, center, [&](std::span<const std::int64_t> z, double) {
        Eigen::Map<const IntVector> zv(z.data(), static_cast<Eigen::Index>(z.size()));
        Vector x = lambda + coarse.basis() * zv.cast<double>();
        const double w = std::exp(-decay * (x.squaredNorm() - nearest));
        total += w;
        if (decay * (x.squaredNorm() - nearest) > 0.5 * excess) shell += w;
        table.points.push_back(std::move(x));
        weights.push_back(w);
        if (table.points.size() > max_table_size) {
          overflow = true;
          return false;
        }
        return true;
      });
      if (overflow) {
        throw NumericalFailure(
            "discrete Gaussian table exceeds its size cap; sigma_s is too large", 0.0, 1.0);
      }
      if (shell <= kMassCutoff * total) {
        table.cumulative.resize(weights.size());
        double running = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
          running += weights[i];
          table.cumulative[i] = running / total;
        }
        table.cumulative.back() = 1.0;
        tables_.push_back(std::move(table));
        break;
      }
      excess *= 2.0;
    }
  }
}

Vector DiscreteGaussianEncoder::encode(Message m, RandomStream& rng) const {
  if (m.id < 0 || m.id >= static_cast<std::int64_t>(tables_.size()))
    throw InputError("message id out of range");
  const Table& table = tables_[static_cast<std::size_t>(m.id)];
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  auto it = std::upper_bound(table.cumulative.begin(), table.cumulative.end(), u);
  if (it == table.cumulative.end()) --it;
  return table.points[static_cast<std::size_t>(it - table.cumulative.begin())];
}

std::vector<GaussianTableEntry> DiscreteGaussianEncoder::table(Message m) const {
  if (m.id < 0 || m.id >= static_cast<std::int64_t>(tables_.size()))
    throw InputError("message id out of range");
  const Table& table = tables_[static_cast<std::size_t>(m.id)];
  std::vector<GaussianTableEntry> entries;
  double previous = 0.0;
  for (std::size_t i = 0; i < table.points.size(); ++i) {
    entries.push_back({table.points[i], table.cumulative[i] - previous});
    previous = table.cumulative[i];
  }
  return entries;
}

ModShapingEncoder::ModShapingEncoder(const CosetCode& code, const Lattice& shaping)
    : code_(code), shaping_code_(NestedPair(code.pair().coarse(), shaping)) {}

Vector ModShapingEncoder::encode(Message m, RandomStream& rng) const {
  const Vector& lambda = code_.representative(m);
  std::uniform_int_distribution<std::int64_t> pick(0, shaping_code_.size() - 1);
  return lambda + shaping_code_.representative({pick(rng)});
}

Vector encode_gaussian(const CosetCode& code, Message m, ShapingParams shaping,
                       RandomStream& rng) {
  return DiscreteGaussianEncoder(code, shaping).encode(m, rng);
}

Vector encode_mod_lambda_s(const CosetCode& code, const Lattice& shaping, Message m,
                           RandomStream& rng) {
  return ModShapingEncoder(code, shaping).encode(m, rng);
}

}  // namespace wiretap
