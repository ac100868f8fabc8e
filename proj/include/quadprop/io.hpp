#ifndef QUADPROP_IO_HPP
#define QUADPROP_IO_HPP

#include "quadprop/characteristic.hpp"
#include "quadprop/grid.hpp"
#include "quadprop/hamiltonian.hpp"
#include "quadprop/mehler.hpp"
#include "quadprop/nls.hpp"

#include <filesystem>
#include <string>
#include <vector>

// vendored single-header nlohmann/json
#include <json.hpp>

namespace quadprop {

using json = nlohmann::json;

// shortest round-trippable decimal (deterministic CSV output)
std::string format_double(double v);

void write_characteristic_csv(const std::filesystem::path& path, const CharacteristicSolution& sol);
void write_phases_csv(const std::filesystem::path& path, const std::vector<MehlerPhase>& phases);
// state slice along `axis` through the center of the other axes: columns x, Re u, Im u
void write_state_csv(const std::filesystem::path& path, const GridState& s, int axis = 0);
void write_kernel_slice_csv(const std::filesystem::path& path, const std::vector<double>& xs,
                            const std::vector<cdouble>& values);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

// binary dump: magic "QPRD", u32 version, u32 d, per axis {u64 n, f64 center,
// f64 spacing}, then interleaved Re/Im little-endian f64
void write_state_binary(const std::filesystem::path& path, const GridState& s);
GridState read_state_binary(const std::filesystem::path& path);

json coefficient_to_json(const CoefficientFn& fn);
CoefficientFn coefficient_from_json(const json& j);
json spec_to_json(const HamiltonianSpec& spec);
HamiltonianSpec spec_from_json(const json& j);

// rejects keys outside `allowed` (anti-typo contract for config documents)
void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& context);

} // namespace quadprop

#endif
