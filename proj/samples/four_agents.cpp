// Clarke payments, both heterogeneous rebate rules and the agent ranking for a
// four-agent, two-object auction.

#include "redistrib/redistrib.hpp"

#include <iostream>

int main() {
  using namespace redistrib;
  const auto profile = BidProfile::from_rows({{4, 5}, {2, 1}, {1, 4}, {1, 0}});

  const auto clarke = clarke_payments(profile);
  std::cout << "allocation:";
  for (const auto& a : clarke.allocation.pairs) {
    std::cout << " agent " << a.agent + 1 << " -> object " << a.object + 1 << ';';
  }
  std::cout << "\nsurplus: " << clarke.surplus << "\npayments:";
  for (double t : clarke.payments) std::cout << ' ' << t;

  SurplusCache cache(profile);
  std::cout << "\nbailey-cavallo rebates:";
  for (double r : bailey_cavallo_rebates(profile, cache)) std::cout << ' ' << r;

  const auto alphas = hetero_alphas(profile.agents(), profile.objects());
  std::cout << "\nhetero alpha_1 = " << to_string(alphas.alpha[0]) << ", rebates:";
  for (double r : hetero_rebates(profile, alphas, cache)) std::cout << ' ' << r;

  const auto ranking = rank_agents(profile);
  std::cout << "\nranking:";
  for (std::size_t agent : ranking.order()) std::cout << ' ' << agent + 1;
  std::cout << '\n';
}
