#include "mklock/logic.hpp"

namespace mklock {

std::optional<Logic> logic_from_char(char c) noexcept {
    switch (c) {
        case '0': return Logic::Zero;
        case '1': return Logic::One;
        case 'x':
        case 'X': return Logic::X;
        default: return std::nullopt;
    }
}

namespace {

Logic invert(Logic v) {
    return v == Logic::X ? Logic::X : v == Logic::One ? Logic::Zero : Logic::One;
}

}  // namespace

Logic kleene_eval(GateKind kind, std::span<const Logic> fanins) {
    switch (kind) {
        case GateKind::Buf: return fanins[0];
        case GateKind::Not: return invert(fanins[0]);
        case GateKind::And:
        case GateKind::Nand: {
            Logic r = Logic::One;
            for (Logic v : fanins) {
                if (v == Logic::Zero) {
                    r = Logic::Zero;
                    break;
                }
                if (v == Logic::X) r = Logic::X;
            }
            return kind == GateKind::And ? r : invert(r);
        }
        case GateKind::Or:
        case GateKind::Nor: {
            Logic r = Logic::Zero;
            for (Logic v : fanins) {
                if (v == Logic::One) {
                    r = Logic::One;
                    break;
                }
                if (v == Logic::X) r = Logic::X;
            }
            return kind == GateKind::Or ? r : invert(r);
        }
        case GateKind::Xor:
        case GateKind::Xnor: {
            bool parity = false;
            for (Logic v : fanins) {
                if (v == Logic::X) return Logic::X;
                parity ^= v == Logic::One;
            }
            return from_bool(parity != (kind == GateKind::Xnor));
        }
    }
    return Logic::X;
}

}  // namespace mklock
