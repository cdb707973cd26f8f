#pragma once

#include <smtl/netlist.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace smtl::test
{

/* random combinational network over primitive gates; every gate is reachable from some output */
inline boolean_network random_network( uint32_t num_inputs, uint32_t num_gates, uint64_t seed, bool with_xor = true )
{
  std::mt19937_64 rng( seed );
  std::vector<std::string> inputs, nets;
  for ( uint32_t i = 0; i < num_inputs; ++i )
  {
    inputs.push_back( "i" + std::to_string( i ) );
    nets.push_back( inputs.back() );
  }
  gate_kind const kinds[] = { gate_kind::and_gate, gate_kind::or_gate, gate_kind::nand_gate, gate_kind::nor_gate,
                              gate_kind::not_gate, gate_kind::xor_gate };
  std::vector<gate_declaration> gates;
  std::vector<bool> used( num_inputs + num_gates, false );
  for ( uint32_t g = 0; g < num_gates; ++g )
  {
    auto kind = kinds[rng() % ( with_xor ? 6u : 5u )];
    uint32_t arity = kind == gate_kind::not_gate ? 1u : 2u + static_cast<uint32_t>( rng() % 4u );
    std::vector<std::string> ins;
    std::vector<uint32_t> picked;
    while ( ins.size() < arity )
    {
      /* bias toward recent nets for depth */
      auto const span = std::min<std::size_t>( nets.size(), 8u + rng() % 8u );
      auto const idx = static_cast<uint32_t>( nets.size() - 1u - rng() % span );
      if ( std::find( picked.begin(), picked.end(), idx ) != picked.end() )
      {
        if ( picked.size() + 1u >= nets.size() )
          break;
        continue;
      }
      picked.push_back( idx );
      used[idx] = true;
      ins.push_back( nets[idx] );
    }
    if ( ins.empty() )
      continue;
    if ( ins.size() == 1u && kind != gate_kind::not_gate )
      kind = gate_kind::not_gate;
    nets.push_back( "g" + std::to_string( g ) );
    gates.push_back( gate_declaration{ nets.back(), kind, ins, 0 } );
  }
  std::vector<std::string> outputs;
  for ( std::size_t n = num_inputs; n < nets.size(); ++n )
  {
    if ( !used[n] )
      outputs.push_back( nets[n] );
  }
  return boolean_network::build( inputs, outputs, gates );
}

} // namespace smtl::test
