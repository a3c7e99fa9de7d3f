#pragma once

#include <map>
#include <set>

namespace allocsim {

// Final allocation result: who got what, how long they waited, how satisfied
// they ended up, and who quit. Participants absent from assignment and quit
// were still unresolved when the run stopped.
struct AllocationOutcome {
  std::map<int, int> assignment;       // participant -> resource (injective)
  std::map<int, int> wait_rounds;      // resolution round - entry round
  std::map<int, double> satisfaction;  // U_i; 0 for quit/unallocated
  std::set<int> quit;
};

}  // namespace allocsim
