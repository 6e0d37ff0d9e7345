#ifndef MDIQKD_DECOY_HPP
#define MDIQKD_DECOY_HPP

#include <iosfwd>

#include "mdiqkd/interference.hpp"
#include "mdiqkd/params.hpp"

namespace mdiqkd {

enum class Level { Mu = 0, Nu = 1, Omega = 2 };

const char* level_name(Level l);

struct GainEntry {
    double q = 0.0;   // gain
    double eq = 0.0;  // error-weighted gain
};

// Observed gains for every (basis, Alice level, Bob level).
class GainTable {
public:
    GainEntry& at(Basis b, Level la, Level lb) { return e_[idx(b)][idx(la)][idx(lb)]; }
    const GainEntry& at(Basis b, Level la, Level lb) const { return e_[idx(b)][idx(la)][idx(lb)]; }

    // Columns basis,q_a,q_b,Q,EQ; q_a/q_b hold level names (mu, nu, omega).
    void write_csv(std::ostream& os) const;
    // Throws ValidationError on malformed rows, duplicates or missing entries.
    static GainTable read_csv(std::istream& is);

private:
    template <class E>
    static int idx(E e) { return static_cast<int>(e); }

    GainEntry e_[2][3][3]{};
};

double intensity_of(const PartyIntensities& p, Level l);

GainTable build_gain_table(const IntensitySettings& settings, const ChannelGeometry& geometry,
                           const SystemParams& params);

enum class DecoyCase { Case1, Case2 };

const char* case_name(DecoyCase c);

struct Y11Bound {
    double value = 0.0;  // clamped to [0,1]
    double raw = 0.0;
    DecoyCase case_used = DecoyCase::Case1;
};

// Two-decoy lower bound on the single-photon yield of a basis. The case is
// picked from the intensity ratios of the two parties.
Y11Bound y11_lower_bound(const GainTable& table, const IntensitySettings& settings, Basis basis);

// Unclamped value of one specific case, regardless of which one applies.
double y11_bound_for_case(const GainTable& table, const IntensitySettings& settings, Basis basis, DecoyCase c);

struct E11Bound {
    double value = 0.0;  // clamped to [0,1]
    double raw = 0.0;
};

// Upper bound on the X-basis single-photon error. Throws NumericalError when
// y11_x_lower <= 0 (the error rate is then unbounded).
E11Bound e11_upper_bound_detail(const GainTable& table, const IntensitySettings& settings, double y11_x_lower);
double e11_upper_bound(const GainTable& table, const IntensitySettings& settings, double y11_x_lower);

struct DecoyBounds {
    Y11Bound y11_z;
    Y11Bound y11_x;
    E11Bound e11_x;
    bool e11_bounded = false;  // false when y11_x.value == 0
};

DecoyBounds decoy_bounds(const GainTable& table, const IntensitySettings& settings);

}  // namespace mdiqkd

#endif  // MDIQKD_DECOY_HPP
