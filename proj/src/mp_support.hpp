#pragma once

#include <cmath>
#include <mutex>

#include <boost/multiprecision/mpfr.hpp>

namespace afcert {

namespace bmp = boost::multiprecision;
using mpf = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;

// mpfr default precision is process-global
inline std::mutex& mp_mutex() {
  static std::mutex m;
  return m;
}

struct MpPrecision {
  std::lock_guard<std::mutex> lock{mp_mutex()};
  unsigned saved;
  explicit MpPrecision(int bits) : saved(mpf::default_precision()) {
    mpf::default_precision(static_cast<unsigned>(std::ceil(bits * 0.30103)) + 5);
  }
  ~MpPrecision() { mpf::default_precision(saved); }
};

}  // namespace afcert
