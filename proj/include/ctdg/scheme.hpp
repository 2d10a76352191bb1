#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ctdg/limiter.hpp"
#include "ctdg/transport.hpp"

namespace ctdg {

enum class Placement { CoLocated, Staggered };
enum class TracerForm { Advective, Conservative };
enum class LimiterKind { None, Mmr, Baseline };

std::string to_string(Placement p);
std::string to_string(TracerForm f);
std::string to_string(LimiterKind l);
Placement parse_placement(const std::string& s);
TracerForm parse_form(const std::string& s);
LimiterKind parse_limiter(const std::string& s);

struct SchemeConfig {
  Placement placement = Placement::CoLocated;
  int order = 1;
  TracerForm form = TracerForm::Conservative;
  LimiterKind limiter = LimiterKind::None;
  /// Density guard for the identification step is eps_factor times the mean density.
  double eps_factor = 1e-12;
};

/// Spaces and the per-step operator sequence for one configuration.
///
///   co-located k=1   transport in the original DQ1 space
///   k=0              recover to DQ1 (conservatively for m), transport, project back
///   staggered k=1    project rho / (conservatively) inject m into DQ1 x DQ2,
///                    transport, project back
///
/// Mixing-ratio maps in the conservative scheme use the mean-shifted projection
/// so a constant m stays constant.
class Scheme {
public:
  Scheme(std::shared_ptr<const Mesh> mesh, SchemeConfig config, VelocityPtr velocity);

  const SchemeConfig& config() const { return config_; }
  const SpacePtr& rho_space() const { return rho_space_; }
  const SpacePtr& m_space() const { return m_space_; }
  const SpacePtr& transport_space() const { return transport_space_; }
  /// Continuous recovery space (k = 0 only).
  const SpacePtr& recovered_space() const { return recovered_space_; }
  const DgTransport& transport() const { return transport_; }

  /// One full step from t to t + dt. rho and every m start and end in their
  /// original spaces. Limiter activity is added to `stats`.
  void advance(Field& rho, std::vector<Field>& ms, double t, double dt, LimiterStats* stats = nullptr) const;

  std::string describe() const;

private:
  SchemeConfig config_;
  SpacePtr rho_space_, m_space_, transport_space_, recovered_space_;
  DgTransport transport_;
};

} // namespace ctdg
