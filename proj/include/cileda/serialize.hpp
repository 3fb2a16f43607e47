#pragma once

#include <string>

#include "cileda/cilda.hpp"
#include "cileda/ensemble.hpp"
#include "cileda/scn.hpp"

namespace cileda {

// Model files are JSON with a "kind" discriminator ("scn", "cilda", "cileda").
// Doubles survive the round trip bit for bit, and a fixed seed yields byte
// identical files regardless of thread count.

std::string scn_to_json(const ScnModel& model);
ScnModel scn_from_json(const std::string& text);

std::string cilda_to_json(const CildaModel& model);
CildaModel cilda_from_json(const std::string& text);

std::string ensemble_to_json(const EnsembleModel& model);
EnsembleModel ensemble_from_json(const std::string& text);

void save_text(const std::string& path, const std::string& text);
std::string load_text(const std::string& path);

// Dispatches on "kind"; exactly one of the outputs is filled, and the
// returned string names it.
struct AnyModel {
    std::string kind;
    ScnModel scn;
    CildaModel cilda;
    EnsembleModel ensemble;
};
AnyModel load_model(const std::string& path);

}  // namespace cileda
