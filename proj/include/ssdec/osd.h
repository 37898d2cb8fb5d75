#ifndef SSDEC_OSD_H
#define SSDEC_OSD_H

#include <span>
#include <string>
#include <vector>

#include "ssdec/bitmatrix.h"
#include "ssdec/gf2_linalg.h"

namespace ssdec {

enum class OsdMethod { None, Order0, Exhaustive, CombinationSweep };

struct OsdConfig {
    OsdMethod method = OsdMethod::Exhaustive;
    std::size_t order = 10;
    std::size_t lambda = 60;
};

inline constexpr std::size_t kMaxOsdOrder = 20;

/// Parses "none", "0", "exhaustive[:w]" or "sweep[:lambda]".
OsdConfig parse_osd(const std::string &spec);
/// "none", "order0", "exhaustive" or "sweep".
std::string osd_strategy_name(const OsdConfig &cfg);
/// w for exhaustive, lambda for sweep, 0 otherwise.
std::size_t osd_param(const OsdConfig &cfg);

/// Columns sorted by ascending reliability, ties by index.
std::vector<Index> reliability_order(std::span<const double> reliabilities);

struct InformationSet {
    std::vector<Index> order;
    PivotRecord record;
    /// Non-pivot columns in scan order, so the least reliable come first.
    std::vector<Index> T;
};

InformationSet information_set(const BitMatrix &h, std::span<const double> reliabilities);

/// The unique u with H u = s and u restricted to info.T equal to x (x indexed like info.T).
BitVector encode_correction(const BitMatrix &h, const BitVector &s, const InformationSet &info, const BitVector &x);

/// OSD post-processing bound to one check matrix.
class OsdDecoder {
   public:
    explicit OsdDecoder(const BitMatrix &h);

    /// `hard` supplies the BP hard decisions whose restriction to T seeds the search.
    BitVector decode(const BitVector &s, std::span<const double> reliabilities, const BitVector &hard,
                     const OsdConfig &cfg);

    const BitMatrix &matrix() const {
        return h_;
    }

   private:
    BitMatrix h_;
};

BitVector osd_decode(const BitMatrix &h, const BitVector &s, std::span<const double> reliabilities,
                     const BitVector &hard, const OsdConfig &cfg);

}  // namespace ssdec

#endif
