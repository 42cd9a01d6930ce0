#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pap/kripke.hpp"
#include "pap/parser.hpp"
#include "pap/psem.hpp"
#include "pap/semantics.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitSemantic = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pap::PapError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Atomic write: temp file in place, then rename.
void write_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw pap::PapError("cannot write " + tmp);
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw pap::PapError("cannot rename " + tmp + " to " + path);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

json status_set_json(const pap::StatusSet& s) {
    json arr = json::array();
    for (const auto& a : s) arr.push_back(pap::to_string(a));
    return arr;
}

struct CommonOpts {
    std::string program_path, state_path, out_path;
    std::string strategy_default = "ig";
    std::string closure = "extended";
    double p = 1.0;
    bool trace = false;

    pap::Strategy strategy() const {
        auto s = pap::strategy_from_string(strategy_default);
        if (!s) throw pap::PapError("unknown default strategy " + strategy_default);
        return *s;
    }
    pap::ClosureVariant closure_variant() const {
        if (closure == "classical") return pap::ClosureVariant::Classical;
        if (closure == "extended") return pap::ClosureVariant::Extended;
        throw pap::PapError("unknown closure variant " + closure);
    }
    pap::Program load_program() const { return pap::parse_program(slurp(program_path),
                                                                  program_path, strategy()); }
    pap::ProbState load_state() const { return pap::parse_state(slurp(state_path), state_path); }
};

// First precondition binding grounds effect variables not fixed by the
// invocation; the invocation itself must ground all parameters.
pap::Binding gamma_binding(const pap::Program& prog, const pap::ProbState& state,
                           const pap::GroundAction& ga, const pap::ActionDef** def_out) {
    auto it = prog.actions.find(ga.name);
    if (it == prog.actions.end()) throw pap::PapError("undeclared action " + ga.name);
    const pap::ActionDef& def = it->second;
    if (def.params.size() != ga.args.size())
        throw pap::PapError("arity mismatch for action " + ga.name);
    pap::Binding theta;
    for (size_t i = 0; i < def.params.size(); ++i) theta.vars[def.params[i]] = ga.args[i];
    *def_out = &def;
    if (def.pre.empty()) return theta;
    auto gammas = pap::ground_condition(state, def.pre, theta, /*filter=*/true);
    return gammas.empty() ? theta : gammas.front();
}

int cmd_eval(const CommonOpts& opts) {
    pap::Program prog = opts.load_program();
    pap::ProbState state = opts.load_state();
    pap::Trace trace;
    pap::SResult res = pap::compute_lfp(prog, state, opts.closure_variant(), opts.p,
                                        opts.trace ? &trace : nullptr);
    std::ostringstream out;
    if (opts.trace)
        for (const auto& t : trace)
            out << "i=" << t.iteration << " rule=" << t.rule_id
                << " head=" << pap::to_string(t.head) << "\n";
    json j;
    if (res.ok) {
        j["status"] = "ok";
        j["set"] = status_set_json(res.set);
    } else {
        j["status"] = "error";
        j["message"] = res.message;
    }
    out << j.dump() << "\n";
    emit(out.str(), opts.out_path);
    return res.ok ? kExitOk : kExitSemantic;
}

int cmd_check(const CommonOpts& opts, const std::string& check_path) {
    pap::Program prog = opts.load_program();
    pap::ProbState state = opts.load_state();
    pap::StatusSet ps = pap::parse_status_set(slurp(check_path), check_path);
    auto v = pap::ClosureVariant::Classical;
    auto rep = pap::check_feasible(prog, state, ps, opts.p, v);
    json j;
    j["ps1"] = rep.ps1_ok;
    j["ps2"] = rep.ps2_ok;
    j["ps3"] = rep.ps3_ok;
    j["ps4"] = rep.ps4_ok;
    j["feasible"] = rep.feasible();
    j["witnesses"] = rep.witnesses;
    if (rep.feasible()) {
        bool grounded = pap::check_grounded(prog, state, ps, opts.p, v);
        j["rational"] = grounded;
        j["reasonable"] = grounded && pap::check_reasonable(prog, state, ps, opts.p, v);
    } else {
        j["rational"] = false;
        j["reasonable"] = false;
    }
    emit(j.dump() + "\n", opts.out_path);
    return kExitOk;
}

int cmd_kripke(const CommonOpts& opts) {
    pap::ProbState state = opts.load_state();
    emit(pap::to_string(pap::product_kripke(state)), opts.out_path);
    return kExitOk;
}

int cmd_step(const CommonOpts& opts, const std::string& action_text, bool kripke, bool force) {
    pap::Program prog = opts.load_program();
    pap::ProbState state = opts.load_state();
    pap::GroundAction ga = pap::parse_action_invocation(action_text);
    const pap::ActionDef* def = nullptr;
    pap::Binding tg = gamma_binding(prog, state, ga, &def);
    auto rep = pap::possibly_executable(state, *def, tg);
    if (!rep.possible && !force) {
        json j;
        j["status"] = "error";
        j["message"] = "action " + pap::to_string(ga) + " is not possibly executable";
        emit(j.dump() + "\n", opts.out_path);
        return kExitSemantic;
    }
    if (kripke) {
        pap::KripkeStructure k = pap::product_kripke(state);
        emit(pap::to_string(pap::execute_action_kripke(k, *def, tg)), opts.out_path);
    } else {
        pap::ProbState next = pap::conc_execute(prog, state, {ga});
        emit(pap::to_string(next), opts.out_path);
    }
    return kExitOk;
}

int cmd_ic_check(const CommonOpts& opts, const std::string& action_text,
                 const std::string& export_lp) {
    pap::Program prog = opts.load_program();
    pap::ProbState state = opts.load_state();
    pap::GroundAction ga = pap::parse_action_invocation(action_text);
    const pap::ActionDef* def = nullptr;
    pap::ActionExecution exec;
    exec.theta_gamma = gamma_binding(prog, state, ga, &def);
    exec.action = *def;
    auto verdicts =
        pap::check_ic_p_consistency(state, exec, prog.integrity_constraints, opts.p);
    if (!export_lp.empty() && !prog.integrity_constraints.empty()) {
        pap::LPProblem lp = pap::generate_ic_lp(state, exec, prog.integrity_constraints.front(),
                                                prog.integrity_constraints, opts.p);
        write_file(export_lp, pap::render_lp(lp));
    }
    json arr = json::array();
    bool all = true;
    for (size_t i = 0; i < verdicts.size(); ++i) {
        json j;
        j["ic"] = pap::to_string(prog.integrity_constraints[i]);
        j["guaranteed"] = verdicts[i].guaranteed;
        j["min_prob"] = verdicts[i].min_prob;
        j["lp_feasible"] = verdicts[i].lp_feasible;
        arr.push_back(j);
        all = all && verdicts[i].guaranteed;
    }
    json out;
    out["p"] = opts.p;
    out["verdicts"] = arr;
    emit(out.dump() + "\n", opts.out_path);
    return all ? kExitOk : kExitSemantic;
}

int cmd_parse(const CommonOpts& opts) {
    std::ostringstream out;
    if (!opts.program_path.empty()) out << pap::to_string(opts.load_program());
    if (!opts.state_path.empty()) out << pap::to_string(opts.load_state());
    emit(out.str(), opts.out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"probabilistic agent program interpreter"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string check_path, action_text, export_lp;
    bool kripke = false, force = false;

    auto add_common = [&](CLI::App* cmd, bool need_prog, bool need_state) {
        auto* po = cmd->add_option("--program", opts.program_path, "program file (.pap)");
        auto* so = cmd->add_option("--state", opts.state_path, "state file (.pst)");
        if (need_prog) po->required();
        if (need_state) so->required();
        cmd->add_option("--strategy-default", opts.strategy_default,
                        "strategy for unannotated condition groups");
        cmd->add_option("--closure", opts.closure, "closure variant: classical|extended");
        cmd->add_option("-o,--out", opts.out_path, "output file (atomic write)");
    };

    auto* eval = app.add_subcommand("eval", "compute the reasonable status set");
    add_common(eval, true, true);
    eval->add_option("--p", opts.p, "relaxation level for precondition entailment");
    eval->add_flag("--trace", opts.trace, "print one line per fired ground rule");

    auto* check = app.add_subcommand("check", "classify a candidate status set");
    add_common(check, true, true);
    check->add_option("--check", check_path, "status-set file")->required();
    check->add_option("--p", opts.p, "relaxation level");

    auto* kripke_cmd = app.add_subcommand("kripke", "dump the product Kripke structure");
    add_common(kripke_cmd, false, true);

    auto* step = app.add_subcommand("step", "execute one ground action");
    add_common(step, true, true);
    step->add_option("--action", action_text, "ground action invocation")->required();
    step->add_flag("--kripke", kripke, "execute over the product Kripke structure");
    step->add_flag("--force", force, "proceed even when not possibly executable");

    auto* ic = app.add_subcommand("ic-check", "integrity-constraint p-consistency");
    add_common(ic, true, true);
    ic->add_option("--action", action_text, "ground action invocation")->required();
    ic->add_option("--p", opts.p, "consistency level")->required();
    ic->add_option("--export-lp", export_lp, "write the generated LP (atomic write)");

    auto* parse = app.add_subcommand("parse", "parse and re-render inputs");
    add_common(parse, false, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(eval)) return cmd_eval(opts);
        if (app.got_subcommand(check)) return cmd_check(opts, check_path);
        if (app.got_subcommand(kripke_cmd)) return cmd_kripke(opts);
        if (app.got_subcommand(step)) return cmd_step(opts, action_text, kripke, force);
        if (app.got_subcommand(ic)) return cmd_ic_check(opts, action_text, export_lp);
        if (app.got_subcommand(parse)) return cmd_parse(opts);
    } catch (const pap::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const pap::PapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
