#include "qnl/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace qnl {
namespace {

// FFTW planning is not thread-safe; execution via the new-array interface is.
// Plans are created FFTW_UNALIGNED so they apply to any buffer.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache c;
    return c;
  }

  fftw_plan get(const SpectralGrid& g, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    Key key{g.dim, g.n[0], g.n[1], g.n[2], sign};
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<fftw_complex> scratch(g.size());
    fftw_plan p;
    if (g.dim == 2)
      p = fftw_plan_dft_2d(g.n[0], g.n[1], scratch.data(), scratch.data(), sign,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
    else
      p = fftw_plan_dft_3d(g.n[0], g.n[1], g.n[2], scratch.data(), scratch.data(), sign,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_[key] = p;
    return p;
  }

 private:
  using Key = std::tuple<int, int, int, int, int>;
  std::mutex mu_;
  std::map<Key, fftw_plan> plans_;
};

void execute(const SpectralGrid& g, cplx* data, int sign) {
  fftw_plan p = PlanCache::instance().get(g, sign);
  auto* raw = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, raw, raw);
}

}  // namespace

void transform(ScalarField& f) {
  const auto& g = f.grid();
  if (f.rep() == Rep::Physical) {
    execute(g, f.data(), FFTW_FORWARD);
    f.set_rep(Rep::Fourier);
  } else {
    execute(g, f.data(), FFTW_BACKWARD);
    const double inv = 1.0 / static_cast<double>(g.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= inv;
    f.set_rep(Rep::Physical);
  }
}

void transform(VectorField& f) {
  for (int a = 0; a < f.dim(); ++a) transform(f.comp(a));
}

ScalarField in_rep(const ScalarField& f, Rep rep) {
  ScalarField out = f;
  if (out.rep() != rep) transform(out);
  return out;
}

VectorField in_rep(const VectorField& f, Rep rep) {
  VectorField out = f;
  if (out.rep() != rep) transform(out);
  return out;
}

}  // namespace qnl
