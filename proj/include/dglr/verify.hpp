#pragma once

#include "dglr/dgl.hpp"

namespace dglr {

// one report per lemma verification run; payload is JSON text so the CLI
// can stream it without re-serializing
struct VerificationReport {
    std::string lemma_id;
    enum class Status { Pass, Fail, Budget } status = Status::Fail;
    std::string witnesses_json;  // structured payload
    double ms = 0;
    std::string parameters_json;

    bool passed() const { return status == Status::Pass; }
};

struct VerifyContext {
    Digraph digraph;          // defaults to the 2-cycle
    int n = 7;
    Int p = 1117;
    Int budget = 2000000;
    Scale scale = Scale::Paper;
};

std::vector<std::string> lemma_ids();
VerificationReport verify_lemma(const std::string& id, const VerifyContext& ctx);

}  // namespace dglr
