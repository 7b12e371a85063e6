#pragma once

#include <string>

// Named formulas used across the tests.
namespace named {

inline const char* kPhi1 = "nu x. (~Xc x | Xg mu y. (q & ~Yc y))";
inline const char* kPhi2 = "nu x. (Xc lastg | Xc Yg x)";
inline const char* kPhi3 = "mu x. ((nu y. q | Xc y) | Xg x | Yg x)";
inline const char* kPhi4 = "mu x. (Xc Xg x | p)";
// Running example word.
inline const char* kW0 = "a:1 b:2 a:2 a:1 b:3 a:1 b:2";

inline const char* kBridge = "mu x. (Xg Xc x | a)";

inline std::string bridgeK(int k) {
    std::string s;
    for (int i = 0; i < k; ++i) s += "Xg Xc ";
    return s + "a";
}

}  // namespace named
