#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "pap/parser.hpp"

namespace testutil {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string data_path(const std::string& name) {
    return std::string(PAP_DATA_DIR) + "/" + name;
}

inline pap::Program load_program(const std::string& name) {
    return pap::parse_program(slurp(data_path(name)), name);
}

inline pap::ProbState load_state(const std::string& name) {
    return pap::parse_state(slurp(data_path(name)), name);
}

inline pap::GroundStatusAtom atom(pap::Modality m, const std::string& action,
                                  std::vector<pap::Object> args = {}) {
    return {m, {action, std::move(args)}};
}

}  // namespace testutil
