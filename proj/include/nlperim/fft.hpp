#ifndef NLPERIM_FFT_HPP
#define NLPERIM_FFT_HPP

#include <complex>
#include <cstddef>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace nlperim {

namespace detail {
inline std::mutex& fftw_planner_mutex()
{
  static std::mutex m;
  return m;
}
} // namespace detail

/// Real <-> half-complex transforms on an n^d periodic grid (row-major).
class RealFft {
 public:
  RealFft(int d, int n) : d_(d), n_(n)
  {
    real_size_ = 1;
    for (int i = 0; i < d; ++i) real_size_ *= static_cast<std::size_t>(n);
    complex_size_ = real_size_ / n * (n / 2 + 1);
    auto* in = fftw_alloc_real(real_size_);
    auto* out = fftw_alloc_complex(complex_size_);
    std::vector<int> dims(d, n);
    {
      std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
      fwd_ = fftw_plan_dft_r2c(d, dims.data(), in, out, FFTW_ESTIMATE);
      bwd_ = fftw_plan_dft_c2r(d, dims.data(), out, in, FFTW_ESTIMATE);
    }
    fftw_free(in);
    fftw_free(out);
  }

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  ~RealFft()
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }

  std::size_t real_size() const { return real_size_; }
  std::size_t complex_size() const { return complex_size_; }

  std::vector<std::complex<double>> forward(const std::vector<double>& x) const
  {
    Buffer<double> in(real_size_);
    Buffer<fftw_complex> out(complex_size_);
    std::copy(x.begin(), x.end(), in.p);
    fftw_execute_dft_r2c(fwd_, in.p, out.p);
    std::vector<std::complex<double>> y(complex_size_);
    for (std::size_t i = 0; i < complex_size_; ++i) y[i] = {out.p[i][0], out.p[i][1]};
    return y;
  }

  /// unnormalized inverse (FFTW convention)
  std::vector<double> backward(const std::vector<std::complex<double>>& y) const
  {
    Buffer<fftw_complex> in(complex_size_);
    Buffer<double> out(real_size_);
    for (std::size_t i = 0; i < complex_size_; ++i) {
      in.p[i][0] = y[i].real();
      in.p[i][1] = y[i].imag();
    }
    fftw_execute_dft_c2r(bwd_, in.p, out.p);
    return std::vector<double>(out.p, out.p + real_size_);
  }

  /// r[k] = sum_x a[x] b[x + k]  (periodic)
  std::vector<double> correlate(const std::vector<double>& a, const std::vector<double>& b) const
  {
    auto A = forward(a);
    auto B = a.data() == b.data() ? A : forward(b);
    for (std::size_t i = 0; i < A.size(); ++i) A[i] = std::conj(A[i]) * B[i];
    auto r = backward(A);
    const double inv = 1.0 / static_cast<double>(real_size_);
    for (auto& v : r) v *= inv;
    return r;
  }

 private:
  template <class T>
  struct Buffer {
    explicit Buffer(std::size_t n) : p(static_cast<T*>(fftw_malloc(sizeof(T) * n))) {}
    ~Buffer() { fftw_free(p); }
    T* p;
  };

  int d_, n_;
  std::size_t real_size_ = 0, complex_size_ = 0;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

} // namespace nlperim

#endif
