#include "carl/kernels.hpp"

#include <omp.h>

namespace carl {

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

}  // namespace carl
