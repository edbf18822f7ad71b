#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ancient_heat/domain.hpp"

namespace ancient_heat {

// 17 significant digits: round-trips any double, keeps report files
// byte-identical across runs.
std::string format_double(double v);

// JSON scalar: null for non-finite values (JSON has no Inf/NaN)
std::string json_number(double v);
std::string json_number(std::optional<double> v);
std::string json_number(std::optional<int> v);

// write to <path>.tmp in the same directory, then rename
void atomic_write(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

// {"n":…, "edges":[[i,j,w],…], "origin":…, "lattice":{…}|null}
DomainGraph read_domain_json(const std::string& path);
std::string domain_to_json(const DomainGraph& g);
void write_domain_json(const DomainGraph& g, const std::string& path);

// header vertex,value; ids 0..n-1 complete and sorted
ScalarField read_scalar_csv(const std::string& path);
std::string scalar_to_csv(const ScalarField& a);
void write_scalar_csv(const ScalarField& a, const std::string& path);

// header vertex,t,value; vertex-major blocks not required on read
SpaceTimeField read_spacetime_csv(const std::string& path);
std::string spacetime_to_csv(const SpaceTimeField& u);
void write_spacetime_csv(const SpaceTimeField& u, const std::string& path);

}  // namespace ancient_heat
