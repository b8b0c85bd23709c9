#include "support/goldens.hpp"

namespace specomp::testing {

std::vector<GoldenCase> golden_cases() {
  auto reg = [](const char* r, Value v) { return Inputs{{Location::of_reg(r), v}}; };
  return {
      {"listing 1, b", listing(1), "b", {},
       "^ store(256) · store(256) · pc(6) · start(B,0) · pc(4) · load(256) · load(513) · rollback(B,0) $"},
      {"listing 1, s", listing(1), "s", {},
       "^ store(256) ··· store(256) · start(S,*) · skip(2) · pc(6) · rollback(S,*) · pc(6) $"},
      {"listing 1, b+s", listing(1), "b+s", reg("sec", 3),
       "start(S,*) · skip(2) · pc(6) · start(B,*) · pc(4) · load(256) · load(515) · rollback(B,*) · rollback(S,*)"},
      {"listing 2, r", listing(2), "r", reg("secret", 40),
       "^ call(Speculate) · call(Manip_Stack) · ret(7) · start(R,0) · ret(3) · load(40) · load(*)"},
      {"listing 3, s", listing(3), "s", reg("sec", 3),
       "store(256) · start(S,*) · skip(1) · load(256) · load(2560) · rollback(S,*)"},
      {"listing 4, s+r", listing(4), "s+r", reg("secret", 2),
       "^ call(Speculate) ··· start(R,0) ··· start(S,1) ··· rollback(S,1) ··· start(S,*) · skip(4) · load(256) · "
       "load(2)"},
      {"call/branch listing, b+r", call_branch_listing(), "b+r", reg("secret", 2),
       "^ call(Speculate) ··· start(R,0) ··· start(B,1) · pc(5) · load(2) ··· rollback(B,1) ··· rollback(R,0) $"},
      {"listing 5, b+s+r", listing(5), "b+s+r", reg("secret", 2),
       "start(S,*) · skip(9) · call(Speculate) · call(Manip_Stack) · ret(11) · start(R,*) · ret(3) · pc(7) · "
       "start(B,*) · pc(5) · load(256) · load(2) ··· rollback(B,*) ··· rollback(R,*) · rollback(S,*)"},
  };
}

}  // namespace specomp::testing
