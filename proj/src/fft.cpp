#include "wavelab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace wavelab::detail {

namespace {

struct PlanKey {
  int dim, npts, sign;
  bool operator<(const PlanKey& o) const {
    return std::tie(dim, npts, sign) < std::tie(o.dim, o.npts, o.sign);
  }
};

std::mutex g_plan_mutex;
std::map<PlanKey, fftw_plan>& plan_cache() {
  static std::map<PlanKey, fftw_plan> cache;
  return cache;
}

fftw_plan get_plan(const GridSpec& g, int sign, fftw_complex* in, fftw_complex* out) {
  const PlanKey key{g.dim, g.npts, sign};
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = plan_cache().find(key);
  if (it != plan_cache().end()) return it->second;
  std::vector<int> dims(g.dim, g.npts);
  const int fftw_sign = sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD;
  fftw_plan p = fftw_plan_dft(g.dim, dims.data(), in, out, fftw_sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fftw plan creation failed");
  plan_cache().emplace(key, p);
  return p;
}

}  // namespace

void dft(const GridSpec& g, const cplx* in, cplx* out, int sign) {
  if (in == out) throw std::invalid_argument("dft: in-place transform not supported");
  auto* fin = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in));
  auto* fout = reinterpret_cast<fftw_complex*>(out);
  fftw_plan p = get_plan(g, sign, fin, fout);
  fftw_execute_dft(p, fin, fout);
}

}  // namespace wavelab::detail
