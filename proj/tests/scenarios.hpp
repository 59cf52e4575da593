#pragma once

// Programs and configurations shared by the unit tests and the acceptance
// binary.

#include <string>

namespace bestow::testing {

/// One actor receiving two distinguishable messages from the root.
inline const std::string kTwoMessages = R"(
val a = new c
a ! \x:p. x.mutate()
a ! \y:p. new p
)";

/// The root owns a node and bestows it. A client reads it twice; another
/// actor mutates it once. Reads and the interfering write all run on the
/// root.
inline std::string adjacentReads(bool batched) {
  const std::string reads = batched ? "atomic it <- r { it ! \\n:p. n.mutate(); it ! \\n:p. n.mutate() }"
                                    : "r ! \\n:p. n.mutate(); r ! \\n:p. n.mutate()";
  return "val r = bestow (new p)\n"
         "val client = new c\n"
         "val other = new c\n"
         "client ! \\t:p. { " + reads + " }\n"
         "other ! \\t:p. r ! \\n:p. n.mutate()\n";
}

// Hand-built heaps that break one well-formedness premise each.

/// @2 is in both local heaps.
inline const char* kSharedLocHeap =
    "(heap (actor #0 (this @0) (local @0 @2) (queue) (expr unit))"
    " (actor #1 (this @1) (local @1 @2) (queue) (expr unit)))";

/// Actor #0 mutates @1, which belongs to #1.
inline const char* kForeignLocHeap =
    "(heap (actor #0 (this @0) (local @0) (queue) (expr (mutate @1)))"
    " (actor #1 (this @1) (local @1) (queue) (expr unit)))";

/// @1 is bestowed as if by #0, but #1 owns it.
inline const char* kWrongBestowerHeap =
    "(heap (actor #0 (this @0) (local @0) (queue) (expr (send @1#0 (fn y p (mutate y)))))"
    " (actor #1 (this @1) (local @1) (queue) (expr unit)))";

/// Both actors are about to mutate the shared @2.
inline const char* kRacyHeap =
    "(heap (actor #0 (this @0) (local @0 @2) (queue) (expr (mutate @2)))"
    " (actor #1 (this @1) (local @1 @2) (queue) (expr (mutate @2))))";

}  // namespace bestow::testing
