#pragma once

#include <string>

#include "fraclab/grid.hpp"
#include "fraclab/measure.hpp"

namespace fraclab {

// Set and measure file formats.
//
//   FRS1  one-line JSON header {"format":"FRS1","dim":..,"resolution":..,
//         "origin":[..],"extent":[..],"count":n} + '\n', then n little-endian
//         uint64 row-major flattened cell indices. `origin` is stated in
//         cell units (multiples of 1/resolution), which keeps headers exact.
//   FRSJ  the same header fields plus "cells": [[i1,..,id], ...], all JSON.
//   FRM1  FRS1 with n little-endian float64 weights appended after the
//         indices; format field "FRM1".
enum class SetFormat { FRS1, FRSJ };

void save_grid_set(const GridSet& s, const std::string& path, SetFormat format = SetFormat::FRS1);
GridSet load_grid_set(const std::string& path);

void save_measure(const WeightedMeasure& m, const std::string& path);
WeightedMeasure load_measure(const std::string& path);

}  // namespace fraclab
