// Temperature-difference sweeps (T1 fixed, T2 = T1 + dT), crossing search and CSV output.

#pragma once

#include "lambflux/bath.hpp"
#include "lambflux/lambshift.hpp"
#include "lambflux/model.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lambflux::experiments {

enum class GridScale { Linear, Log };

GridScale parse_scale(const std::string& name);
std::string_view name_of(GridScale scale) noexcept;

// Points are dT / omega_d.
struct Grid {
    double min{1e-2};
    double max{1e2};
    std::size_t count{200};
    GridScale scale{GridScale::Log};

    std::vector<double> points() const;
};

void validate(const Grid& grid);

struct SweepConfig {
    model::SystemParams system{};
    double t1{1.0};
    double gamma1{0.01};
    double gamma2{0.01};
    double omega_d{50.0};
    Grid grid{};
    std::vector<bath::SpectralKind> variants{bath::SpectralKind::Drude};
    bool include_lamb{true};
    std::string output;
    lambshift::LambShiftOptions lamb{};
    unsigned threads{0};                  // 0: one per hardware thread
    std::size_t spot_check_interval{20};  // Drude: compare against quadrature every n-th point, 0 = never
    double spot_check_tol{1e-6};

    bath::Bath bath1(bath::SpectralKind kind) const;
    bath::Bath bath2(bath::SpectralKind kind, double delta_t) const;
};

void validate(const SweepConfig& cfg);

struct SweepRow {
    double delta_t{};
    double omega1{};
    double omega2{};
    double delta1{};
    double delta2{};
    double r21{};     // NaN unless bath 2 is Drude
    double r22{};
    double r21_est{};
    double r22_est{};
    double j0{};
    double jdelta{};
    double dj{};
    double supremum{};
    double margin1{};
    double margin2{};
    bath::SpectralKind variant{bath::SpectralKind::Drude};
};

// One grid point at absolute dT. With spot_check set and a Drude variant, the
// increments are recomputed by quadrature and compared.
SweepRow evaluate_point(const SweepConfig& cfg, bath::SpectralKind kind, double delta_t,
                        bool spot_check = false);

struct PointFailure {
    std::size_t index{};
    double delta_t{};
    std::string code;
    std::string message;
};

// Every failing grid point of a sweep, in grid order.
class SweepError : public std::runtime_error {
public:
    explicit SweepError(std::vector<PointFailure> failures);

    const std::vector<PointFailure>& failures() const noexcept { return failures_; }
    const std::string& code() const noexcept { return failures_.front().code; }

private:
    std::vector<PointFailure> failures_;
};

// Rows for one variant, in grid order regardless of thread count.
std::vector<SweepRow> sweep(const SweepConfig& cfg, bath::SpectralKind kind);

// All configured variants, one block per variant in configuration order.
std::vector<SweepRow> sweep(const SweepConfig& cfg);

// The three spectral densities on the same grid, all through the quadrature route.
std::map<bath::SpectralKind, std::vector<SweepRow>> compare_spectra(const SweepConfig& cfg);

struct Crossing {
    double delta_t{}; // absolute
    double bound{};
};

// First dT on the grid hull where |J_1^delta| reaches the no-Lamb supremum,
// refined by bisection to 1e-6 omega_d. Empty when it never does on the grid.
std::optional<Crossing> find_crossing(const SweepConfig& cfg, bath::SpectralKind kind);
std::optional<Crossing> find_crossing(const SweepConfig& cfg, bath::SpectralKind kind,
                                      double bound);

inline constexpr const char* kCsvSchema = "schema=lambflux.v1";

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_csv(const std::string& path, const std::vector<SweepRow>& rows);

// Shortest round-trip decimal form; "nan" and "inf"/"-inf" for non-finite values.
std::string format_number(double value);

} // namespace lambflux::experiments
