/*!
  \file serialization.hpp
  \brief JSON files exchanged between the tool stages

  Every document carries `"format"` and `"version"` fields. Readers throw
  `parse_error` for malformed JSON or missing and mistyped fields, and the
  structural exceptions of the owning module for inconsistent content.

  Boolean network (`smtl.boolean_network`):
  \verbatim
  { "inputs": [name...], "outputs": [name...],
    "gates": [ { "output": name, "type": "NAND", "inputs": [name...] } ] }
  \endverbatim

  Threshold network (`smtl.tln`): signal ids as in `threshold_network`.
  \verbatim
  { "inputs": [name...],
    "nodes": [ { "id", "name", "role", "origin", "weights": [int...], "bias", "fanins": [id...] } ],
    "outputs": [ { "name", "id" } ],
    "synthesis": { "fanin_limit", "w_max" },   optional
    "source": boolean network,                 optional
    "summary": { "nodes", "levels", "max_fanin" } }
  \endverbatim

  Mapped design (`smtl.mapped_design`):
  \verbatim
  { "params": {...}, "source": boolean network or null, "logic": tln,
    "network": tln, "levels": [per signal id], "levels_per_stage",
    "layout": { "subarray_rows", "subarray_cols",
                "layers": [ { "levels": [...], "blocks": [ { "nodes": [id...], "rows" } ] } ] },
    "links": [ { "source", "target", "kind", "length" } ],
    "warnings": [...], "blocks_per_layer", "absorbed_layers", "summary": {...} }
  \endverbatim
  Links are recomputed and the design is validated on load.

  Device parameters (`smtl.device_params`): one number per field of
  `device_params`, all SI; missing fields keep their defaults and unknown
  fields are rejected.
*/

#pragma once

#include <smtl/devices.hpp>
#include <smtl/evaluator.hpp>
#include <smtl/mapper.hpp>
#include <smtl/netlist.hpp>
#include <smtl/synthesis.hpp>
#include <smtl/threshold.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace smtl
{

std::string network_to_json( boolean_network const& network );
boolean_network network_from_json( std::string const& text );

struct tln_document
{
  threshold_network tln;
  std::optional<synthesis_params> synthesis;
  std::optional<boolean_network> source;
};

std::string tln_to_json( tln_document const& doc );
tln_document tln_from_json( std::string const& text );

std::string design_to_json( mapped_design const& design );
mapped_design design_from_json( std::string const& text );

std::string device_params_to_json( device_params const& params );
device_params device_params_from_json( std::string const& text );

/*! \brief Run settings echoed into an evaluation report. */
struct evaluation_run
{
  double sigma = 0.0;
  uint64_t seed = 0;
  simulation_result simulation;
  std::optional<tolerance_result> tolerance;
};

std::string report_to_json( evaluation_report const& report, evaluation_run const& run, device_params const& params,
                            evaluation_params const& eval );

/*! \brief Reads a whole file; throws `smtl_error` when it cannot be opened. */
std::string read_text_file( std::string const& path );

/*! \brief Writes through a temporary file in the same directory and renames it into place. */
void write_text_file_atomic( std::string const& path, std::string const& contents );

} // namespace smtl
