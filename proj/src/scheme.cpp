#include "ctdg/scheme.hpp"

#include <sstream>

#include "ctdg/error.hpp"
#include "ctdg/quadrature.hpp"
#include "ctdg/remap.hpp"

namespace ctdg {

std::string to_string(Placement p) { return p == Placement::CoLocated ? "co-located" : "staggered"; }
std::string to_string(TracerForm f) { return f == TracerForm::Advective ? "advective" : "conservative"; }
std::string to_string(LimiterKind l)
{
  switch (l) {
  case LimiterKind::None: return "none";
  case LimiterKind::Mmr: return "mmr";
  case LimiterKind::Baseline: return "baseline";
  }
  return "none";
}

Placement parse_placement(const std::string& s)
{
  if (s == "co-located" || s == "colocated") return Placement::CoLocated;
  if (s == "staggered") return Placement::Staggered;
  throw Error("unknown placement '" + s + "' (co-located | staggered)");
}

TracerForm parse_form(const std::string& s)
{
  if (s == "advective") return TracerForm::Advective;
  if (s == "conservative" || s == "conservative-tracer") return TracerForm::Conservative;
  throw Error("unknown form '" + s + "' (advective | conservative)");
}

LimiterKind parse_limiter(const std::string& s)
{
  if (s == "none") return LimiterKind::None;
  if (s == "mmr") return LimiterKind::Mmr;
  if (s == "baseline") return LimiterKind::Baseline;
  throw Error("unknown limiter '" + s + "' (none | mmr | baseline)");
}

namespace {

struct Spaces {
  SpacePtr rho, m, transport, recovered;
};

Spaces choose_spaces(const std::shared_ptr<const Mesh>& mesh, const SchemeConfig& c)
{
  require(mesh != nullptr, "Scheme: null mesh");
  require(c.order == 0 || c.order == 1, "Scheme: order must be 0 or 1");
  require(c.placement == Placement::CoLocated || mesh->kind() == MeshKind::Slice,
          "Scheme: staggered placement needs a slice mesh");
  require(c.limiter != LimiterKind::Mmr || c.placement == Placement::CoLocated,
          "Scheme: the mmr limiter is only available for co-located placement");
  require(c.limiter == LimiterKind::None || !(c.placement == Placement::Staggered && c.order == 1),
          "Scheme: limiters need the DQ1 x DQ1 transport space (not staggered k=1)");
  Spaces s;
  if (c.order == 1) {
    s.rho = make_space(mesh, SpaceSpec::rho1());
    if (c.placement == Placement::CoLocated) {
      s.m = s.rho;
      s.transport = s.rho;
    } else {
      s.m = make_space(mesh, SpaceSpec::theta1());
      s.transport = make_space(mesh, SpaceSpec::theta_hat());
    }
  } else {
    s.rho = make_space(mesh, SpaceSpec::rho0());
    s.m = c.placement == Placement::CoLocated ? s.rho : make_space(mesh, SpaceSpec::theta0());
    s.transport = make_space(mesh, SpaceSpec::rho1());
    s.recovered = make_space(mesh, SpaceSpec::recovered1());
  }
  return s;
}

template <class F>
auto named(const char* op, F&& f)
{
  try {
    return f();
  } catch (const Error& e) {
    throw Error(std::string(op) + ": " + e.what());
  }
}

double mean_density(const Field& rho)
{
  CompensatedSum area;
  for (double a : rho.space().mesh().cell_areas()) area.add(a);
  return std::abs(integrate(rho)) / area.value();
}

} // namespace

Scheme::Scheme(std::shared_ptr<const Mesh> mesh, SchemeConfig config, VelocityPtr velocity)
    : config_(config), transport_([&] {
        const Spaces s = choose_spaces(mesh, config);
        rho_space_ = s.rho;
        m_space_ = s.m;
        transport_space_ = s.transport;
        recovered_space_ = s.recovered;
        return DgTransport(s.transport, std::move(velocity));
      }())
{
}

std::string Scheme::describe() const
{
  std::ostringstream os;
  os << to_string(config_.placement) << " k=" << config_.order << " " << to_string(config_.form) << " (rho "
     << rho_space_->spec().name() << ", m " << m_space_->spec().name() << ", transport "
     << transport_space_->spec().name() << ")";
  return os.str();
}

void Scheme::advance(Field& rho, std::vector<Field>& ms, double t, double dt, LimiterStats* stats) const
{
  require(rho.space_ptr() == rho_space_, "advance: density is not on the scheme's density space");
  for (const Field& m : ms) require(m.space_ptr() == m_space_, "advance: mixing ratio is not on the scheme's space");
  const bool conservative = config_.form == TracerForm::Conservative;
  const SpacePtr& T = transport_space_;
  const std::size_t nt = ms.size();

  // Shift for the consistent projections, shared by the way in and out.
  std::vector<double> shift;
  for (const Field& m : ms) shift.push_back(global_mean(m));

  // 1. Map to the transport space.
  Field rho_t;
  std::vector<Field> m_t;
  if (config_.order == 1 && config_.placement == Placement::CoLocated) {
    rho_t = rho;
    m_t = ms;
  } else if (config_.order == 0) {
    rho_t = named("recover rho", [&] { return recovery(rho, recovered_space_, T); });
    for (std::size_t i = 0; i < nt; ++i)
      m_t.push_back(conservative ? named("conservatively recover m",
                                         [&] { return conservative_recovery(ms[i], rho, rho_t, recovered_space_, shift[i]); })
                                 : named("recover m", [&] { return recovery(ms[i], recovered_space_, T); }));
  } else {
    rho_t = named("project rho", [&] { return galerkin_project(rho, T); });
    for (const Field& m : ms)
      m_t.push_back(conservative ? named("conservatively inject m", [&] { return conservative_inject(m, rho, rho_t, T); })
                                 : named("inject m", [&] { return inject(m, T); }));
  }

  // 2. Transport.
  const double eps = config_.eps_factor * mean_density(rho_t);
  State s0{rho_t.coeffs()};
  for (const Field& m : m_t)
    s0.push_back(conservative ? project_product(rho_t, m, T).coeffs() : m.coeffs());

  const RhsFunction rhs = [&](const State& s, double time) {
    const Field r(T, s[0]);
    State out{transport_.conservative_rhs(r, time)};
    for (std::size_t i = 0; i < nt; ++i) {
      const Field f(T, s[i + 1]);
      out.push_back(conservative ? transport_.product_rhs(r, identify_mixing_ratio(f, r, eps), time)
                                 : transport_.advective_rhs(f, time));
    }
    return out;
  };

  StageHook hook;
  LimiterStats local;
  if (config_.limiter != LimiterKind::None) {
    hook = [&](State& s, int) {
      Field r(T, s[0]);
      if (config_.limiter == LimiterKind::Baseline && !conservative) {
        r = positive_definite_vertex_limiter(r, &local);
        s[0] = r.coeffs();
      }
      for (std::size_t i = 0; i < nt; ++i) {
        Field m = conservative ? identify_mixing_ratio(Field(T, s[i + 1]), r, eps) : Field(T, s[i + 1]);
        if (m.min() >= 0.0) continue;
        m = config_.limiter == LimiterKind::Mmr ? apply_mmr_limiter(m, r, &local)
                                                : positive_definite_vertex_limiter(m, &local);
        s[i + 1] = conservative ? project_product(r, m, T).coeffs() : m.coeffs();
      }
    };
  }

  const State s1 = named("transport", [&] { return ssprk3_step(s0, rhs, t, dt, hook); });
  if (stats) *stats += local;
  rho_t = Field(T, s1[0]);
  for (std::size_t i = 0; i < nt; ++i)
    m_t[i] = conservative ? named("identify m", [&] { return identify_mixing_ratio(Field(T, s1[i + 1]), rho_t, eps); })
                          : Field(T, s1[i + 1]);

  // 3. Back to the original spaces.
  if (config_.order == 1 && config_.placement == Placement::CoLocated) {
    rho = rho_t;
    ms = m_t;
    return;
  }
  Field rho_new = named("project rho", [&] { return galerkin_project(rho_t, rho_space_); });
  for (std::size_t i = 0; i < nt; ++i)
    ms[i] = conservative ? named("conservatively project m",
                                 [&] { return consistent_conservative_project(m_t[i], rho_t, rho_new, m_space_, shift[i]); })
                         : named("project m", [&] { return galerkin_project(m_t[i], m_space_); });
  rho = std::move(rho_new);
}

} // namespace ctdg
