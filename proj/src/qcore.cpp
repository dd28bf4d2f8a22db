#include "sqe/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace sqe {
namespace {

constexpr double kIsometryTolerance = 1e-9;

// Composite indices are row-major over the factor list: the first factor is
// the most significant digit. stride[k] is the weight of factor k's digit.
std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

// Offsets into the ambient index for every multi-index over `positions`,
// enumerated row-major in the order `positions` is given.
std::vector<int> offsets_over(const std::vector<int>& dims, const std::vector<int>& strides,
                              const std::vector<std::size_t>& positions) {
  std::vector<int> out{0};
  for (std::size_t pos : positions) {
    std::vector<int> next;
    next.reserve(out.size() * static_cast<std::size_t>(dims[pos]));
    for (int base : out)
      for (int digit = 0; digit < dims[pos]; ++digit) next.push_back(base + digit * strides[pos]);
    out = std::move(next);
  }
  return out;
}

struct Split {
  std::vector<int> keep_offsets;
  std::vector<int> trace_offsets;
};

Split split_indices(const SubsystemDims& dims, const Labels& keep) {
  std::vector<bool> kept(dims.size(), false);
  for (const auto& label : keep) kept[dims.index_of(label)] = true;
  std::vector<std::size_t> keep_pos;
  std::vector<std::size_t> trace_pos;
  for (std::size_t k = 0; k < dims.size(); ++k) (kept[k] ? keep_pos : trace_pos).push_back(k);
  const auto strides = strides_of(dims.dims());
  return {offsets_over(dims.dims(), strides, keep_pos),
          offsets_over(dims.dims(), strides, trace_pos)};
}

void check_disjoint(const Labels& a, const Labels& b, const char* what) {
  for (const auto& x : a)
    if (std::find(b.begin(), b.end(), x) != b.end())
      throw ValidationError(std::string(what) + ": label '" + x + "' appears in two sets");
}

Labels join(const Labels& a, const Labels& b) {
  Labels out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Eigen::VectorXd checked_spectrum(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("spectrum: matrix is not square");
  if (m.rows() == 0) return {};
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kStateTolerance) {
    std::ostringstream os;
    os << "matrix is not Hermitian (max asymmetry " << asym << ")";
    throw ValidationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = solver.eigenvalues();
  if (ev.minCoeff() < -kStateTolerance) {
    std::ostringstream os;
    os << "negative eigenvalue " << ev.minCoeff() << " beyond tolerance";
    throw ValidationError(os.str());
  }
  ev = ev.cwiseMax(0.0);
  return ev;
}

}  // namespace

// ---------------------------------------------------------------------------
// SubsystemDims

SubsystemDims::SubsystemDims(std::vector<int> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  if (dims_.size() != labels_.size())
    throw ValidationError("SubsystemDims: dims and labels differ in length");
  for (int d : dims_)
    if (d < 1) throw ValidationError("SubsystemDims: dimensions must be positive");
  std::set<std::string> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second) throw ValidationError("SubsystemDims: duplicate label '" + l + "'");
}

int SubsystemDims::total() const {
  return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
}

bool SubsystemDims::contains(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t SubsystemDims::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw ValidationError("unknown subsystem label '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

SubsystemDims SubsystemDims::restricted_to(const Labels& keep) const {
  std::vector<bool> kept(size(), false);
  for (const auto& l : keep) kept[index_of(l)] = true;
  std::vector<int> d;
  Labels l;
  for (std::size_t k = 0; k < size(); ++k) {
    if (!kept[k]) continue;
    d.push_back(dims_[k]);
    l.push_back(labels_[k]);
  }
  return {std::move(d), std::move(l)};
}

// ---------------------------------------------------------------------------
// States

DensityOperator::DensityOperator(CMatrix matrix, SubsystemDims dims)
    : matrix_(std::move(matrix)), dims_(std::move(dims)) {
  if (matrix_.rows() != dims_.total() || matrix_.cols() != dims_.total())
    throw ValidationError("DensityOperator: matrix size does not match subsystem dimensions");
  const cplx tr = matrix_.trace();
  if (std::abs(tr.real() - 1.0) > kStateTolerance || std::abs(tr.imag()) > kStateTolerance) {
    std::ostringstream os;
    os << "DensityOperator: trace " << tr << " is not 1";
    throw ValidationError(os.str());
  }
  checked_spectrum(matrix_);
}

DensityOperator DensityOperator::maximally_mixed(SubsystemDims dims) {
  const int d = dims.total();
  return {CMatrix::Identity(d, d) / static_cast<double>(d), std::move(dims)};
}

PureState::PureState(CVector amplitudes, SubsystemDims dims)
    : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
  if (amplitudes_.size() != dims_.total())
    throw ValidationError("PureState: amplitude count does not match subsystem dimensions");
  if (std::abs(amplitudes_.norm() - 1.0) > kStateTolerance)
    throw ValidationError("PureState: vector is not normalized");
}

DensityOperator PureState::density() const {
  return {DensityOperator::Unchecked{}, amplitudes_ * amplitudes_.adjoint(), dims_};
}

DensityOperator PureState::reduced(const Labels& keep) const {
  const Split s = split_indices(dims_, keep);
  const auto nk = static_cast<Eigen::Index>(s.keep_offsets.size());
  const auto nt = static_cast<Eigen::Index>(s.trace_offsets.size());
  CMatrix m(nk, nt);
  for (Eigen::Index a = 0; a < nk; ++a)
    for (Eigen::Index t = 0; t < nt; ++t)
      m(a, t) = amplitudes_(s.keep_offsets[a] + s.trace_offsets[t]);
  CMatrix rho = m * m.adjoint();
  return {DensityOperator::Unchecked{}, std::move(rho), dims_.restricted_to(keep)};
}

PureState PureState::maximally_entangled(int d, const std::string& first,
                                         const std::string& second) {
  CVector v = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return {std::move(v), SubsystemDims({d, d}, {first, second})};
}

IsometryMatrix::IsometryMatrix(CMatrix matrix, SubsystemDims input_dims,
                               SubsystemDims output_dims)
    : matrix_(std::move(matrix)),
      input_dims_(std::move(input_dims)),
      output_dims_(std::move(output_dims)) {
  if (matrix_.rows() != output_dims_.total() || matrix_.cols() != input_dims_.total())
    throw ValidationError("IsometryMatrix: shape does not match input/output dimensions");
  const CMatrix gram = matrix_.adjoint() * matrix_;
  const double dev = (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (dev > kIsometryTolerance) {
    std::ostringstream os;
    os << "IsometryMatrix: V^dagger V deviates from identity by " << dev;
    throw ValidationError(os.str());
  }
}

// ---------------------------------------------------------------------------
// Channels

FiniteChannel::FiniteChannel(std::vector<CMatrix> kraus, int in_dim, int out_dim)
    : kraus_(std::move(kraus)), in_dim_(in_dim), out_dim_(out_dim) {
  if (in_dim_ < 1 || out_dim_ < 1) throw ValidationError("FiniteChannel: dimensions must be positive");
  if (kraus_.empty() || kraus_.size() > static_cast<std::size_t>(in_dim_) * out_dim_)
    throw ValidationError("FiniteChannel: Kraus count must lie in [1, in_dim*out_dim]");
  CMatrix closure = CMatrix::Zero(in_dim_, in_dim_);
  for (const auto& k : kraus_) {
    if (k.rows() != out_dim_ || k.cols() != in_dim_)
      throw ValidationError("FiniteChannel: Kraus operator has the wrong shape");
    closure += k.adjoint() * k;
  }
  const double dev = (closure - CMatrix::Identity(in_dim_, in_dim_)).norm();
  if (dev > kStateTolerance) {
    std::ostringstream os;
    os << "Kraus closure violated: ||sum K^dagger K - I|| = " << dev;
    throw ValidationError(os.str());
  }
}

CMatrix FiniteChannel::apply(const CMatrix& rho) const {
  CMatrix out = CMatrix::Zero(out_dim_, out_dim_);
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

FiniteChannel FiniteChannel::tensor(const FiniteChannel& n, const FiniteChannel& m) {
  std::vector<CMatrix> ks;
  ks.reserve(n.kraus_.size() * m.kraus_.size());
  for (const auto& a : n.kraus_)
    for (const auto& b : m.kraus_) {
      CMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
          k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
      ks.push_back(std::move(k));
    }
  return {std::move(ks), n.in_dim_ * m.in_dim_, n.out_dim_ * m.out_dim_};
}

FiniteChannel FiniteChannel::identity(int dim) {
  return {{CMatrix::Identity(dim, dim)}, dim, dim};
}

// ---------------------------------------------------------------------------
// Entropies

double shannon_entropy(std::span<const double> probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (p < -kStateTolerance || !std::isfinite(p))
      throw ValidationError("shannon_entropy: entry is negative or not finite");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kStateTolerance)
    throw ValidationError("shannon_entropy: probabilities do not sum to 1");
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("binary_entropy: p outside [0,1]");
  const double probs[] = {p, 1.0 - p};
  return shannon_entropy(probs);
}

double bosonic_g(double x) {
  if (!(x >= 0.0)) throw ValidationError("bosonic_g: mean photon number must be >= 0");
  if (x < 1e-12) return 0.0;
  if (std::isinf(x)) return x;
  // (x+1) log(x+1) - x log x = log(1+x) + x log(1 + 1/x)
  return (std::log1p(x) + x * std::log1p(1.0 / x)) / std::log(2.0);
}

double spectrum_entropy(const CMatrix& hermitian) {
  const Eigen::VectorXd ev = checked_spectrum(hermitian);
  const double sum = ev.sum();
  if (std::abs(sum - 1.0) > kStateTolerance)
    throw ValidationError("spectrum_entropy: trace is not 1");
  double h = 0.0;
  for (double lambda : ev) {
    const double p = lambda / sum;
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double von_neumann_entropy(const DensityOperator& rho) { return spectrum_entropy(rho.matrix()); }

DensityOperator partial_trace(const DensityOperator& rho, const Labels& keep) {
  const Split s = split_indices(rho.dims(), keep);
  const auto nk = static_cast<Eigen::Index>(s.keep_offsets.size());
  CMatrix out = CMatrix::Zero(nk, nk);
  const CMatrix& m = rho.matrix();
  for (Eigen::Index a = 0; a < nk; ++a)
    for (Eigen::Index b = 0; b < nk; ++b) {
      cplx acc = 0.0;
      for (int t : s.trace_offsets) acc += m(s.keep_offsets[a] + t, s.keep_offsets[b] + t);
      out(a, b) = acc;
    }
  return {DensityOperator::Unchecked{}, std::move(out), rho.dims().restricted_to(keep)};
}

PureState purify(const DensityOperator& rho) {
  if (rho.dims().contains("R"))
    throw ValidationError("purify: label 'R' is reserved for the purifying factor");
  const int d = rho.dims().total();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.matrix());
  const Eigen::VectorXd ev = solver.eigenvalues().cwiseMax(0.0);
  const double sum = ev.sum();
  // |psi> = sum_i sqrt(lambda_i) |e_i> (x) |i>_R, the R digit least significant.
  CVector psi = CVector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) {
    const double w = std::sqrt(ev(i) / sum);
    if (w == 0.0) continue;
    for (int r = 0; r < d; ++r) psi(r * d + i) += w * solver.eigenvectors()(r, i);
  }
  auto dims = rho.dims().dims();
  auto labels = rho.dims().labels();
  dims.push_back(d);
  labels.push_back("R");
  return {std::move(psi), SubsystemDims(std::move(dims), std::move(labels))};
}

IsometryMatrix kraus_to_isometry(const FiniteChannel& channel) {
  const int out = channel.out_dim();
  const int env = channel.env_dim();
  // Row index b * env + k, i.e. V|psi> = sum_k K_k|psi>_B (x) |k>_E.
  CMatrix v(out * env, channel.in_dim());
  for (int k = 0; k < env; ++k)
    for (int b = 0; b < out; ++b) v.row(b * env + k) = channel.kraus()[k].row(b);
  return {std::move(v), SubsystemDims({channel.in_dim()}, {"A'"}),
          SubsystemDims({out, env}, {"B", "E"})};
}

PureState apply_isometry(const PureState& state, const IsometryMatrix& iso, const std::string& on) {
  if (iso.input_dims().size() != 1)
    throw ValidationError("apply_isometry: isometry must act on a single factor");
  const SubsystemDims& dims = state.dims();
  const std::size_t pos = dims.index_of(on);
  const int din = dims.dims()[pos];
  if (din != iso.input_dims().total())
    throw ValidationError("apply_isometry: input dimension mismatch on factor '" + on + "'");
  for (const auto& l : iso.output_dims().labels())
    if (l != on && dims.contains(l))
      throw ValidationError("apply_isometry: output label '" + l + "' already present");

  int left = 1;
  int right = 1;
  for (std::size_t k = 0; k < pos; ++k) left *= dims.dims()[k];
  for (std::size_t k = pos + 1; k < dims.size(); ++k) right *= dims.dims()[k];
  const int dout = iso.output_dims().total();
  const CMatrix& v = iso.matrix();
  const CVector& in = state.amplitudes();

  // amplitudes viewed as (left, din, right) -> (left, dout, right)
  CVector out = CVector::Zero(static_cast<Eigen::Index>(left) * dout * right);
  for (int l = 0; l < left; ++l)
    for (int j = 0; j < din; ++j)
      for (int r = 0; r < right; ++r) {
        const cplx a = in((l * din + j) * right + r);
        if (a == cplx(0.0)) continue;
        for (int o = 0; o < dout; ++o) out((l * dout + o) * right + r) += v(o, j) * a;
      }

  std::vector<int> nd;
  Labels nl;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (k == pos) {
      nd.insert(nd.end(), iso.output_dims().dims().begin(), iso.output_dims().dims().end());
      nl.insert(nl.end(), iso.output_dims().labels().begin(), iso.output_dims().labels().end());
    } else {
      nd.push_back(dims.dims()[k]);
      nl.push_back(dims.labels()[k]);
    }
  }
  return {std::move(out), SubsystemDims(std::move(nd), std::move(nl))};
}

double conditional_entropy(const DensityOperator& rho, const Labels& target, const Labels& given) {
  check_disjoint(target, given, "conditional_entropy");
  const double joint = von_neumann_entropy(partial_trace(rho, join(target, given)));
  const double cond = given.empty() ? 0.0 : von_neumann_entropy(partial_trace(rho, given));
  return joint - cond;
}

double conditional_entropy(const PureState& psi, const Labels& target, const Labels& given) {
  check_disjoint(target, given, "conditional_entropy");
  const double joint = von_neumann_entropy(psi.reduced(join(target, given)));
  const double cond = given.empty() ? 0.0 : von_neumann_entropy(psi.reduced(given));
  return joint - cond;
}

double conditional_mutual_information(const DensityOperator& rho, const Labels& a,
                                      const Labels& b, const Labels& c) {
  check_disjoint(a, b, "conditional_mutual_information");
  check_disjoint(a, c, "conditional_mutual_information");
  check_disjoint(b, c, "conditional_mutual_information");
  auto entropy = [&](const Labels& keep) {
    return keep.empty() ? 0.0 : von_neumann_entropy(partial_trace(rho, keep));
  };
  return entropy(join(a, c)) + entropy(join(b, c)) - entropy(c) - entropy(join(join(a, b), c));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  auto dims = a.dims().dims();
  auto labels = a.dims().labels();
  dims.insert(dims.end(), b.dims().dims().begin(), b.dims().dims().end());
  labels.insert(labels.end(), b.dims().labels().begin(), b.dims().labels().end());
  const CMatrix& x = a.matrix();
  const CMatrix& y = b.matrix();
  CMatrix k(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      k.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return {std::move(k), SubsystemDims(std::move(dims), std::move(labels))};
}

PureState tensor(const PureState& a, const PureState& b) {
  auto dims = a.dims().dims();
  auto labels = a.dims().labels();
  dims.insert(dims.end(), b.dims().dims().begin(), b.dims().dims().end());
  labels.insert(labels.end(), b.dims().labels().begin(), b.dims().labels().end());
  const CVector& x = a.amplitudes();
  const CVector& y = b.amplitudes();
  CVector k(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) k.segment(i * y.size(), y.size()) = x(i) * y;
  return {std::move(k), SubsystemDims(std::move(dims), std::move(labels))};
}

}  // namespace sqe
