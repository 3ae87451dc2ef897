#pragma once

#include <span>
#include <vector>

#include "mcfa/evolution.hpp"

namespace mcfa::detail {

// Per-slice building blocks shared by the serial and OpenMP kernels.
double slice_action(const Evolution& ev, std::size_t k);
double slice_energy(const Evolution& ev, std::size_t k);
/// ∂_t v at every node of one column of time samples (node i).
void node_velocity_rate(const Evolution& ev, std::size_t i, SpaceTimeField& dv);
std::vector<double> slice_el(const Evolution& ev, std::size_t k, std::span<const double> dv);

double action_serial(const Evolution& ev);
std::vector<double> energy_serial(const Evolution& ev);
SpaceTimeField el_serial(const Evolution& ev);

double action_parallel(const Evolution& ev);
std::vector<double> energy_parallel(const Evolution& ev);
SpaceTimeField el_parallel(const Evolution& ev);

}  // namespace mcfa::detail
