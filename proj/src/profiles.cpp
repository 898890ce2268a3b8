#include "relaxwave/profiles.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <sstream>

#include "relaxwave/structure.hpp"

namespace relaxwave::profiles {

namespace {

// Column-wise complex DFT on a fixed length, backed by one FFTW buffer.
class Fft {
 public:
  explicit Fft(int n) : n_(n), buf_(fftw_alloc_complex(static_cast<std::size_t>(n))) {
    if (!buf_) throw Error(Errc::NumericalFailure, "FFT buffer allocation failed");
    fwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd_ || !bwd_) throw Error(Errc::NumericalFailure, "FFT planning failed");
  }
  ~Fft() {
    if (fwd_) fftw_destroy_plan(fwd_);
    if (bwd_) fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void forward(CMatrix& cols) const { run(cols, fwd_, 1.0); }
  void backward(CMatrix& cols) const { run(cols, bwd_, 1.0 / n_); }

 private:
  void run(CMatrix& cols, fftw_plan plan, double scale) const {
    const auto bytes = sizeof(cplx) * static_cast<std::size_t>(n_);
    for (Eigen::Index c = 0; c < cols.cols(); ++c) {
      std::memcpy(buf_, cols.col(c).data(), bytes);
      fftw_execute(plan);
      std::memcpy(static_cast<void*>(cols.col(c).data()), buf_, bytes);
      if (scale != 1.0) cols.col(c) *= scale;
    }
  }

  int n_;
  fftw_complex* buf_;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

GridSpec GridSpec::make(double L, int N) {
  if (!(L > 0.0) || !std::isfinite(L)) throw Error(Errc::InvalidArgument, "grid half-length must be positive");
  if (N < 16 || !is_power_of_two(N)) throw Error(Errc::InvalidArgument, "grid size must be a power of two >= 16");
  return GridSpec{L, N};
}

InitialData InitialData::gaussian(CVector v, double sigma, double center) {
  if (!(sigma > 0.0)) throw Error(Errc::InvalidArgument, "gaussian width must be positive");
  InitialData d;
  d.kind = Kind::Gaussian;
  d.amplitude = std::move(v);
  d.width = sigma;
  d.center = center;
  return d;
}

InitialData InitialData::box(CVector v, double half_width, double center) {
  if (!(half_width > 0.0)) throw Error(Errc::InvalidArgument, "box half-width must be positive");
  InitialData d;
  d.kind = Kind::Box;
  d.amplitude = std::move(v);
  d.width = half_width;
  d.center = center;
  return d;
}

InitialData InitialData::custom(CMatrix samples) {
  linalg::require_finite(samples, "initial samples");
  InitialData d;
  d.kind = Kind::Custom;
  d.samples = std::move(samples);
  return d;
}

double InitialData::support(const GridSpec& grid) const {
  switch (kind) {
    case Kind::Gaussian: return std::abs(center) + 8.0 * width;
    case Kind::Box: return std::abs(center) + width;
    case Kind::Custom: {
      const double peak = samples.rowwise().norm().maxCoeff();
      double radius = 0.0;
      for (int i = 0; i < samples.rows(); ++i)
        if (samples.row(i).norm() > 1e-14 * peak) radius = std::max(radius, std::abs(grid.x(i)));
      return radius;
    }
  }
  return 0.0;
}

CMatrix InitialData::sample(const GridSpec& grid) const {
  if (kind == Kind::Custom) {
    if (samples.rows() != grid.N) throw Error(Errc::ShapeError, "custom samples do not match the grid size");
    return samples;
  }
  CMatrix out(grid.N, amplitude.size());
  for (int i = 0; i < grid.N; ++i) {
    const double x = grid.x(i) - center;
    double w = 0.0;
    if (kind == Kind::Gaussian)
      w = std::exp(-(x * x) / (width * width));
    else
      w = std::abs(x) <= width ? 1.0 : 0.0;
    out.row(i) = w * amplitude.transpose();
  }
  return out;
}

CMatrix Ghat(const SystemDef& sys, double xi, double t) {
  if (t < 0.0) throw Error(Errc::InvalidArgument, "time must be nonnegative");
  if (t == 0.0) return CMatrix::Identity(sys.n(), sys.n());
  return linalg::expm(sys.E(xi) * t);
}

CMatrix Khat(const reduction::ChapmanEnskogData& red, double xi, double t) {
  const Eigen::Index n = red.P0.rows();
  CMatrix out = CMatrix::Zero(n, n);
  for (const auto& br : red.branches)
    for (const auto& s : br.sub) {
      const cplx phase = std::exp((cplx(0.0, -br.c * xi) - s.d * xi * xi) * t);
      out += phase * linalg::nilpotent_exp(s.Njl0, -xi * xi * t) * s.Pjl0;
    }
  return out;
}

CMatrix Vhat(const reduction::HighFreqData& hf, double xi, double t) {
  const Eigen::Index n = hf.Q.rows();
  CMatrix inner = CMatrix::Zero(n, n);
  for (const auto& br : hf.branches)
    for (const auto& s : br.sub) {
      const cplx phase = std::exp((cplx(0.0, -br.alpha * xi) - s.beta) * t);
      inner += phase * linalg::nilpotent_exp(s.Thetajl0, -t) * s.Pijl0;
    }
  return hf.Q * inner * hf.Qinv;
}

CMatrix Khat_star(const reduction::ChapmanEnskogData& red, double xi, double t) {
  const Eigen::Index n = red.P0.rows();
  CMatrix out = CMatrix::Zero(n, n);
  for (const auto& br : red.branches) {
    if (!br.Pj1 || br.sub.size() != 1)
      throw Error(Errc::MissingPj1, "refined kernel needs simple reduced speeds (condition C')");
    const cplx phase = std::exp((cplx(0.0, -br.c * xi) - br.sub.front().d * xi * xi) * t);
    out += phase * (br.Pj0 + cplx(0.0, xi) * *br.Pj1);
  }
  return out;
}

std::string_view to_string(Profile p) {
  switch (p) {
    case Profile::Exact: return "exact";
    case Profile::Diffusion: return "diffusion";
    case Profile::DiffusionRefined: return "diffusion_refined";
    case Profile::ExpWave: return "expwave";
  }
  return "unknown";
}

struct Solver::Impl {
  SystemDef sys;
  GridSpec grid;
  CMatrix uhat;  // N x n, forward transform of the sampled datum
  double support = 0.0;
  double speed = 0.0;      // max |sigma(A)|
  double diffusion = 0.0;  // max Re d
  std::optional<reduction::ChapmanEnskogData> low;
  std::optional<reduction::HighFreqData> high;
  std::string reduction_error;
  Fft fft;

  Impl(SystemDef s, GridSpec g) : sys(std::move(s)), grid(g), fft(g.N) {}

  // Applies the multiplier bins to the transformed datum and returns the
  // physical-space field. At the Nyquist bin the multiplier is symmetrized
  // so that real kernels keep real fields.
  template <class Kernels>
  void apply(Kernels&& kernels, std::vector<CMatrix*> outputs) const {
    const int N = grid.N;
    const Eigen::Index n = sys.n();
    for (auto* o : outputs) o->resize(N, n);
    std::vector<CMatrix> ms;
    for (int idx = 0; idx < N; ++idx) {
      const double xi = grid.xi(idx);
      kernels(xi, ms);
      if (idx == N / 2) {
        std::vector<CMatrix> mirrored;
        kernels(-xi, mirrored);
        for (std::size_t k = 0; k < ms.size(); ++k) ms[k] = 0.5 * (ms[k] + mirrored[k].conjugate());
      }
      const CVector v = uhat.row(idx).transpose();
      for (std::size_t k = 0; k < outputs.size(); ++k) outputs[k]->row(idx) = (ms[k] * v).transpose();
    }
    for (auto* o : outputs) fft.backward(*o);
  }

  void require_reductions() const {
    if (!low || !high) throw Error(Errc::ConditionViolation, "profiles need the reductions: " + reduction_error);
  }
};

Solver::Solver(SystemDef sys, GridSpec grid, const InitialData& u0)
    : impl_(std::make_unique<Impl>(std::move(sys), GridSpec::make(grid.L, grid.N))) {
  auto& s = *impl_;
  if (u0.n() != s.sys.n()) throw Error(Errc::ShapeError, "initial data dimension does not match the system");
  s.uhat = u0.sample(s.grid);
  linalg::require_finite(s.uhat, "initial samples");
  s.fft.forward(s.uhat);
  s.support = u0.support(s.grid);
  for (const auto& a : linalg::eigenvalues(s.sys.A())) s.speed = std::max(s.speed, std::abs(a));
  try {
    s.low = reduction::reduce_low(s.sys);
    s.high = reduction::reduce_high(s.sys);
    for (const auto& br : s.low->branches)
      for (const auto& sub : br.sub) s.diffusion = std::max(s.diffusion, sub.d.real());
  } catch (const Error& e) {
    if (e.code() != Errc::ConditionViolation) throw;
    s.low.reset();
    s.high.reset();
    s.reduction_error = e.what();
  }
}

Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

const SystemDef& Solver::system() const { return impl_->sys; }
const GridSpec& Solver::grid() const { return impl_->grid; }
const std::optional<reduction::ChapmanEnskogData>& Solver::low() const { return impl_->low; }
const std::optional<reduction::HighFreqData>& Solver::high() const { return impl_->high; }

void Solver::check_domain(double t) const {
  if (t < 0.0) throw Error(Errc::InvalidArgument, "time must be nonnegative");
  const auto& s = *impl_;
  const double need = s.support + s.speed * t + 10.0 * std::sqrt(s.diffusion * t);
  if (s.grid.L < need) {
    std::ostringstream os;
    os << "L = " << s.grid.L << " but t = " << t << " needs L >= " << need;
    throw Error(Errc::DomainTooSmall, os.str());
  }
}

GridSolution Solver::solve(double t, Profile which) const {
  check_domain(t);
  const auto& s = *impl_;
  GridSolution out{s.grid, t, {}};
  std::function<CMatrix(double)> kernel;
  switch (which) {
    case Profile::Exact: kernel = [&](double xi) { return Ghat(s.sys, xi, t); }; break;
    case Profile::Diffusion:
      s.require_reductions();
      kernel = [&](double xi) { return Khat(*s.low, xi, t); };
      break;
    case Profile::DiffusionRefined:
      s.require_reductions();
      kernel = [&](double xi) { return Khat_star(*s.low, xi, t); };
      break;
    case Profile::ExpWave:
      s.require_reductions();
      kernel = [&](double xi) { return Vhat(*s.high, xi, t); };
      break;
  }
  s.apply([&](double xi, std::vector<CMatrix>& ms) { ms.assign(1, kernel(xi)); }, {&out.values});
  return out;
}

Snapshot Solver::snapshot(double t, bool refined) const {
  check_domain(t);
  const auto& s = *impl_;
  s.require_reductions();
  Snapshot snap{{s.grid, t, {}}, {s.grid, t, {}}, {s.grid, t, {}}, {s.grid, t, {}}};
  s.apply(
      [&](double xi, std::vector<CMatrix>& ms) {
        ms.resize(4);
        ms[0] = Ghat(s.sys, xi, t);
        ms[1] = refined ? Khat_star(*s.low, xi, t) : Khat(*s.low, xi, t);
        ms[2] = Vhat(*s.high, xi, t);
        ms[3] = ms[0] - ms[1] - ms[2];
      },
      {&snap.u.values, &snap.U.values, &snap.V.values, &snap.residual.values});
  return snap;
}

}  // namespace relaxwave::profiles
