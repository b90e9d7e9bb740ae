// Copyright 2026 The eml Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eml/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <unordered_set>

namespace eml {

namespace {

struct OpInfo {
    const char* name;
    int num_probs;   // probability arguments in parentheses
    bool pairwise;   // even target count, interpreted as pairs
    bool takes_rec;  // DETECTOR / OBSERVABLE
};

const OpInfo& op_info(Op op) {
    static const OpInfo table[] = {
        {"RESET_Z", 0, false, false},
        {"RESET_X", 0, false, false},
        {"H", 0, false, false},
        {"S", 0, false, false},
        {"S_DAG", 0, false, false},
        {"T", 0, false, false},
        {"CX", 0, true, false},
        {"MEASURE_Z", 0, false, false},
        {"MEASURE_X", 0, false, false},
        {"TICK", 0, false, false},
        {"DEPOL1", 1, false, false},
        {"DEPOL2", 1, true, false},
        {"X_ERROR", 1, false, false},
        {"Z_ERROR", 1, false, false},
        {"ERASE1", 1, false, false},
        {"ERASE2", 1, true, false},
        {"ERASURE_CHECK", 2, false, false},
        {"DETECTOR", 0, false, true},
        {"OBSERVABLE", 0, false, true},
    };
    return table[static_cast<size_t>(op)];
}

const char* role_name(QubitRole role) {
    switch (role) {
        case QubitRole::data:
            return "data";
        case QubitRole::x_ancilla:
            return "x_ancilla";
        case QubitRole::z_ancilla:
            return "z_ancilla";
    }
    return "data";
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

const char* op_name(Op op) {
    return op_info(op).name;
}

bool is_noise(Op op) {
    switch (op) {
        case Op::DEPOL1:
        case Op::DEPOL2:
        case Op::X_ERROR:
        case Op::Z_ERROR:
        case Op::ERASE1:
        case Op::ERASE2:
            return true;
        default:
            return false;
    }
}

bool is_unitary(Op op) {
    switch (op) {
        case Op::H:
        case Op::S:
        case Op::S_DAG:
        case Op::T:
        case Op::CX:
            return true;
        default:
            return false;
    }
}

bool is_reset(Op op) {
    return op == Op::RESET_Z || op == Op::RESET_X;
}

bool is_measurement(Op op) {
    return op == Op::MEASURE_Z || op == Op::MEASURE_X;
}

size_t Circuit::num_measurements() const {
    size_t n = 0;
    for (const auto& inst : instructions)
        if (is_measurement(inst.op))
            n += inst.targets.size();
    return n;
}

size_t Circuit::num_detectors() const {
    size_t n = 0;
    for (const auto& inst : instructions)
        if (inst.op == Op::DETECTOR)
            ++n;
    return n;
}

size_t Circuit::num_observables() const {
    size_t n = 0;
    for (const auto& inst : instructions)
        if (inst.op == Op::OBSERVABLE)
            n = std::max<size_t>(n, inst.obs_id + 1);
    return n;
}

int64_t Circuit::meta_int(const std::string& key, int64_t fallback) const {
    auto it = metadata.find(key);
    if (it == metadata.end())
        return fallback;
    return std::stoll(it->second);
}

void Circuit::set_meta(const std::string& key, int64_t value) {
    metadata[key] = std::to_string(value);
}

ValidationReport validate(const Circuit& circuit) {
    ValidationReport report;
    const size_t q = circuit.qubits.size();

    for (size_t i = 0; i < q; ++i)
        if (circuit.qubits[i].index != i)
            report.push_back({SIZE_MAX, "qubit indices not dense: slot " + std::to_string(i) +
                                            " holds index " + std::to_string(circuit.qubits[i].index)});
    std::set<std::pair<double, double>> coords;
    for (const auto& qubit : circuit.qubits)
        if (!coords.insert({qubit.x, qubit.y}).second)
            report.push_back({SIZE_MAX, "duplicate qubit coords (" + fmt_double(qubit.x) + ", " +
                                            fmt_double(qubit.y) + ")"});

    size_t measurements = 0;
    std::unordered_set<uint32_t> checked_this_round;
    for (size_t i = 0; i < circuit.instructions.size(); ++i) {
        const auto& inst = circuit.instructions[i];
        const auto& info = op_info(inst.op);

        for (uint32_t t : inst.targets)
            if (t >= q)
                report.push_back({i, "target " + std::to_string(t) + " out of range"});
        if (info.pairwise && inst.targets.size() % 2 != 0)
            report.push_back({i, "odd pair count"});
        if (!info.takes_rec && inst.op != Op::TICK && inst.targets.empty())
            report.push_back({i, "missing targets"});
        {
            std::unordered_set<uint32_t> seen;
            for (uint32_t t : inst.targets)
                if (!seen.insert(t).second)
                    report.push_back({i, "duplicate target " + std::to_string(t)});
        }
        if (info.num_probs >= 1 && (inst.arg0 < 0 || inst.arg0 > 1))
            report.push_back({i, "probability out of [0,1]"});
        if (info.num_probs >= 2 && (inst.arg1 < 0 || inst.arg1 > 1))
            report.push_back({i, "probability out of [0,1]"});

        if (info.takes_rec) {
            if (inst.rec.empty())
                report.push_back({i, "empty record reference list"});
            for (int32_t offset : inst.rec)
                if (offset >= 0 || static_cast<size_t>(-offset) > measurements)
                    report.push_back({i, "dangling record"});
        }

        if (inst.op == Op::ERASURE_CHECK) {
            for (uint32_t t : inst.targets)
                if (!checked_this_round.insert(t).second)
                    report.push_back({i, "repeated erasure check on qubit " + std::to_string(t) +
                                             " within a round"});
        }
        if (inst.op == Op::TICK)
            checked_this_round.clear();
        if (is_measurement(inst.op))
            measurements += inst.targets.size();
    }
    return report;
}

ParseError::ParseError(size_t line_, const std::string& message)
    : std::runtime_error("line " + std::to_string(line_) + ": " + message), line(line_) {}

std::string serialize(const Circuit& circuit) {
    std::ostringstream out;
    for (const auto& [key, value] : circuit.metadata)
        out << "#!meta " << key << " " << value << "\n";
    for (const auto& qubit : circuit.qubits)
        out << "QUBIT " << qubit.index << " " << fmt_double(qubit.x) << " " << fmt_double(qubit.y)
            << " " << role_name(qubit.role) << "\n";
    for (const auto& inst : circuit.instructions) {
        const auto& info = op_info(inst.op);
        out << info.name;
        if (info.num_probs == 1)
            out << "(" << fmt_double(inst.arg0) << ")";
        else if (info.num_probs == 2)
            out << "(" << fmt_double(inst.arg0) << "," << fmt_double(inst.arg1) << ")";
        if (inst.op == Op::OBSERVABLE)
            out << " " << inst.obs_id;
        for (uint32_t t : inst.targets)
            out << " " << t;
        for (int32_t offset : inst.rec)
            out << " rec[" << offset << "]";
        out << "\n";
    }
    return out.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> parts;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok)
        parts.push_back(tok);
    return parts;
}

double parse_prob(const std::string& s, size_t line) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "bad probability '" + s + "'");
    }
}

} // namespace

Circuit parse(const std::string& text) {
    Circuit circuit;
    std::istringstream in(text);
    std::string raw;
    size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (line.rfind("#!meta ", 0) == 0) {
            auto parts = split_ws(line.substr(7));
            if (parts.size() != 2)
                throw ParseError(line_no, "malformed meta line");
            circuit.metadata[parts[0]] = parts[1];
            continue;
        }
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        auto parts = split_ws(line);
        if (parts.empty())
            continue;

        if (parts[0] == "QUBIT") {
            if (parts.size() != 5)
                throw ParseError(line_no, "QUBIT needs: index x y role");
            Qubit qubit;
            qubit.index = static_cast<uint32_t>(std::stoul(parts[1]));
            qubit.x = parse_prob(parts[2], line_no);
            qubit.y = parse_prob(parts[3], line_no);
            if (parts[4] == "data")
                qubit.role = QubitRole::data;
            else if (parts[4] == "x_ancilla")
                qubit.role = QubitRole::x_ancilla;
            else if (parts[4] == "z_ancilla")
                qubit.role = QubitRole::z_ancilla;
            else
                throw ParseError(line_no, "unknown qubit role '" + parts[4] + "'");
            circuit.qubits.push_back(qubit);
            continue;
        }

        std::string opcode = parts[0];
        std::string probs;
        auto paren = opcode.find('(');
        if (paren != std::string::npos) {
            if (opcode.back() != ')')
                throw ParseError(line_no, "unbalanced parentheses");
            probs = opcode.substr(paren + 1, opcode.size() - paren - 2);
            opcode = opcode.substr(0, paren);
        }

        Instruction inst;
        bool found = false;
        for (int k = 0; k <= static_cast<int>(Op::OBSERVABLE); ++k) {
            if (opcode == op_info(static_cast<Op>(k)).name) {
                inst.op = static_cast<Op>(k);
                found = true;
                break;
            }
        }
        if (!found)
            throw ParseError(line_no, "unknown opcode '" + opcode + "'");
        const auto& info = op_info(inst.op);

        if (info.num_probs > 0) {
            auto comma = probs.find(',');
            if (info.num_probs == 1) {
                if (probs.empty() || comma != std::string::npos)
                    throw ParseError(line_no, "expected one probability argument");
                inst.arg0 = parse_prob(probs, line_no);
            } else {
                if (comma == std::string::npos)
                    throw ParseError(line_no, "expected two probability arguments");
                inst.arg0 = parse_prob(probs.substr(0, comma), line_no);
                inst.arg1 = parse_prob(probs.substr(comma + 1), line_no);
            }
        } else if (!probs.empty() || paren != std::string::npos) {
            throw ParseError(line_no, "opcode '" + opcode + "' takes no probability");
        }

        size_t arg_start = 1;
        if (inst.op == Op::OBSERVABLE) {
            if (parts.size() < 2)
                throw ParseError(line_no, "OBSERVABLE needs an id");
            inst.obs_id = static_cast<uint32_t>(std::stoul(parts[1]));
            arg_start = 2;
        }
        for (size_t k = arg_start; k < parts.size(); ++k) {
            const std::string& tok = parts[k];
            if (tok.rfind("rec[", 0) == 0) {
                if (tok.back() != ']')
                    throw ParseError(line_no, "malformed record reference");
                inst.rec.push_back(static_cast<int32_t>(std::stol(tok.substr(4, tok.size() - 5))));
            } else {
                try {
                    inst.targets.push_back(static_cast<uint32_t>(std::stoul(tok)));
                } catch (const std::exception&) {
                    throw ParseError(line_no, "bad target '" + tok + "'");
                }
            }
        }
        circuit.instructions.push_back(std::move(inst));
    }
    return circuit;
}

LocationCounts count_locations(const Circuit& circuit) {
    LocationCounts counts;
    std::vector<bool> active(circuit.qubits.size(), false);
    std::vector<bool> measured_this_round(circuit.qubits.size(), false);
    bool round_has_measurement = false;

    auto close_round = [&]() {
        if (round_has_measurement) {
            for (size_t q = 0; q < active.size(); ++q)
                if (active[q] && !measured_this_round[q])
                    ++counts.idle;
        }
        std::fill(measured_this_round.begin(), measured_this_round.end(), false);
        round_has_measurement = false;
    };

    for (const auto& inst : circuit.instructions) {
        switch (inst.op) {
            case Op::H:
            case Op::S:
            case Op::S_DAG:
            case Op::T:
                counts.x1 += inst.targets.size();
                for (uint32_t t : inst.targets)
                    active[t] = true;
                break;
            case Op::CX:
                counts.x2 += inst.targets.size() / 2;
                for (uint32_t t : inst.targets)
                    active[t] = true;
                break;
            case Op::RESET_Z:
            case Op::RESET_X:
                counts.x_spam += inst.targets.size();
                for (uint32_t t : inst.targets)
                    active[t] = true;
                break;
            case Op::MEASURE_Z:
            case Op::MEASURE_X:
                counts.x_spam += inst.targets.size();
                round_has_measurement = true;
                for (uint32_t t : inst.targets) {
                    active[t] = true;
                    measured_this_round[t] = true;
                }
                break;
            case Op::TICK:
                close_round();
                break;
            default:
                break;
        }
    }
    close_round();
    return counts;
}

} // namespace eml
