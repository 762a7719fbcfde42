#include "hubbard_witness/parallel.hpp"

#include <cstdlib>
#include <string>

namespace hw {

int default_thread_count() {
  if (const char* env = std::getenv("HW_NUM_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace hw
