#pragma once

namespace qhhg::au {

// Hartree atomic units: hbar = m_e = e = 1.
inline constexpr double fs = 41.341374575751;  // 1 femtosecond in a.u. of time

}  // namespace qhhg::au
