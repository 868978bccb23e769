/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef MASQKD_PROTOCOL_KIND_HPP_
#define MASQKD_PROTOCOL_KIND_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace masqkd {

/// The three simulated protocol variants.
enum class ProtocolKind {
  Base,       // TP sends |+>, Alice relays to Bob, Bob measures
  Improved,   // Bob applies unitaries and reflects; TP measures in X
  KrawecRef,  // mediated reference: Bell source + Bell measurement at TP
};

inline std::string_view to_string(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::Base:
      return "base";
    case ProtocolKind::Improved:
      return "improved";
    case ProtocolKind::KrawecRef:
      return "krawec_ref";
  }
  throw std::logic_error("unreachable");
}

inline ProtocolKind protocol_kind_from_string(std::string_view s) {
  if (s == "base") return ProtocolKind::Base;
  if (s == "improved") return ProtocolKind::Improved;
  if (s == "krawec_ref") return ProtocolKind::KrawecRef;
  throw std::invalid_argument("unknown protocol: " + std::string(s));
}

}  // namespace masqkd

#endif  // MASQKD_PROTOCOL_KIND_HPP_
