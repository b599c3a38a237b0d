#include "braids/mock/trending.hpp"

#include <algorithm>
#include <cmath>

namespace braids::mock {

double trending_score(long long boosts, long long favorites, Timestamp created_at, Timestamp now) {
  using hours_f = std::chrono::duration<double, std::ratio<3600>>;
  double age = std::max(0.0, std::chrono::duration_cast<hours_f>(now - created_at).count());
  return static_cast<double>(boosts + favorites + 1) / std::pow(age + 2.0, 1.5);
}

}  // namespace braids::mock
