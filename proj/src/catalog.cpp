#include "crnkit/catalog.hpp"

namespace crnkit::catalog {

const char* const kMod3Text = R"(#input X, Y
#vote1 V
#vote0 X, Y
3X -> V
3Y -> V
X + Y -> V
X + V -> X
Y + V -> Y
)";

const char* const kMinText = R"(#input X, Y
#output Z
X + Y -> Z
)";

const char* const kMaxText = R"(#input X, Y
#output Z
X -> X' + Z
Y -> Y' + Z
X' + Y' + Z -> 0
)";

const char* const kExistenceText = R"(#input X100, X010, X001, X000
#vote1 X100, X010, X110
#vote0 X000, X001, X011, X101, X111
X000 + X001 -> 2X001
X000 + X010 -> 2X010
X000 + X011 -> 2X011
X000 + X100 -> 2X100
X000 + X101 -> 2X101
X000 + X110 -> 2X110
X000 + X111 -> 2X111
X001 + X010 -> 2X011
X001 + X011 -> 2X011
X001 + X100 -> 2X101
X001 + X101 -> 2X101
X001 + X110 -> 2X111
X001 + X111 -> 2X111
X010 + X011 -> 2X011
X010 + X100 -> 2X110
X010 + X101 -> 2X111
X010 + X110 -> 2X110
X010 + X111 -> 2X111
X011 + X100 -> 2X111
X011 + X101 -> 2X111
X011 + X110 -> 2X111
X011 + X111 -> 2X111
X100 + X101 -> 2X101
X100 + X110 -> 2X110
X100 + X111 -> 2X111
X101 + X110 -> 2X111
X101 + X111 -> 2X111
X110 + X111 -> 2X111
)";

const char* const kLeaderText = "L + L -> L\n";

const char* const kDoublingCaText = R"(#start q0
#halt qh
#input a
state q0: dec a -> q1 else qh
state q1: inc b -> q2
state q2: inc b -> q0
)";

Crd mod3_crd() { return Crd::from_document(parse_crn(kMod3Text)); }
Crc min_crc() { return Crc::from_document(parse_crn(kMinText)); }
Crc max_crc() { return Crc::from_document(parse_crn(kMaxText)); }
Crd existence_crd() { return Crd::from_document(parse_crn(kExistenceText)); }
Crn leader_election() { return parse_crn(kLeaderText).crn; }
CounterAutomaton doubling_ca() { return parse_ca(kDoublingCaText); }

namespace {

DualRailCrc dual_rail(const char* text) {
  DualRailCrc g;
  g.crc = Crc::from_document(parse_crn(text));
  const Crn& crn = g.crc.crn;
  g.inputs = {{crn.species_index("Xp"), crn.species_index("Xm")},
              {crn.species_index("Yp"), crn.species_index("Ym")}};
  g.output = {crn.species_index("Zp"), crn.species_index("Zm")};
  return g;
}

}  // namespace

DualRailCrc dual_rail_min() {
  return dual_rail(R"(#input Xp, Xm, Yp, Ym
#output Zp, Zm
Xp + Yp -> Zp
Xm -> Yp + Zm
Ym -> Xp + Zm
)");
}

DualRailCrc dual_rail_max() {
  return dual_rail(R"(#input Xp, Xm, Yp, Ym
#output Zp, Zm
Xm + Ym -> Zm
Xp -> Ym + Zp
Yp -> Xm + Zp
)");
}

}  // namespace crnkit::catalog
