#include "rwrs/io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace rwrs {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

double require_number(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_number())
        throw ContractError(std::string("measure json needs numeric field \"") + field + "\"");
    return j[field].get<double>();
}

std::string require_string(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_string())
        throw ContractError(std::string("measure json needs string field \"") + field + "\"");
    return j[field].get<std::string>();
}

ColourAlphabet alphabet_of(const json& j) {
    if (!j.contains("alphabet")) return ColourAlphabet::binary();
    return ColourAlphabet(require_string(j, "alphabet"));
}

std::map<std::string, double> value_map_of(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_object())
        throw ContractError(std::string("measure json needs object field \"") + field + "\"");
    std::map<std::string, double> out;
    for (const auto& [key, value] : j[field].items()) {
        if (!value.is_number())
            throw ContractError("value for \"" + key + "\" must be a number");
        out[key] = value.get<double>();
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

json step_measure_to_json(const StepMeasure& mu) {
    json j;
    switch (mu.kind()) {
        case StepKind::Iid: {
            const auto p = mu.stationary();
            j["kind"] = "iid";
            j["pR"] = p[2];
            j["pL"] = p[0];
            j["pH"] = p[1];
            break;
        }
        case StepKind::Markov: {
            j["kind"] = "markov";
            json t = json::object();
            for (char from : kStepSymbols)
                for (char to : kStepSymbols) {
                    const double p = mu.transition_prob(from, to);
                    if (p > 0.0) t[std::string{from, to}] = p;
                }
            j["transition"] = t;
            break;
        }
        case StepKind::Table: {
            j["kind"] = "table";
            j["depth"] = mu.table_depth();
            json values = json::object();
            // Emit every positive word probability up to the depth.
            std::vector<std::string> stack{""};
            for (int k = 1; k <= mu.table_depth(); ++k) {
                std::vector<std::string> next;
                for (const auto& prefix : stack)
                    for (char s : kStepSymbols) next.push_back(prefix + s);
                for (const auto& u : next)
                    if (mu.word_prob(u) != 0.0) values[u] = mu.word_prob(u);
                stack = std::move(next);
            }
            j["values"] = values;
            break;
        }
    }
    return j;
}

StepMeasure step_measure_from_json(const json& j) {
    const std::string kind = require_string(j, "kind");
    if (kind == "iid") {
        const double ph = j.contains("pH") ? require_number(j, "pH") : 0.0;
        return StepMeasure::iid(require_number(j, "pR"), require_number(j, "pL"), ph);
    }
    if (kind == "markov") return StepMeasure::markov(value_map_of(j, "transition"));
    if (kind == "table") {
        if (!j.contains("depth") || !j["depth"].is_number_integer())
            throw ContractError("table measure json needs integer field \"depth\"");
        return StepMeasure::table(value_map_of(j, "values"), j["depth"].get<int>());
    }
    throw ContractError("unknown step measure kind \"" + kind + "\"");
}

json scenery_measure_to_json(const SceneryMeasure& lambda) {
    json j;
    j["alphabet"] = lambda.alphabet().symbols();
    switch (lambda.kind()) {
        case SceneryKind::Periodic:
            j["kind"] = "periodic";
            j["word"] = lambda.period_word();
            break;
        case SceneryKind::Iid: {
            j["kind"] = "iid";
            std::vector<double> probs;
            for (std::size_t i = 0; i < lambda.alphabet().size(); ++i) {
                const char c = lambda.alphabet().symbol(i);
                probs.push_back(lambda.cylinder_prob(std::string_view(&c, 1)));
            }
            j["probs"] = probs;
            break;
        }
        case SceneryKind::Table: {
            j["kind"] = "table";
            j["depth"] = lambda.table_depth();
            json values = json::object();
            for (int k = 1; k <= lambda.table_depth(); ++k)
                for (const auto& v :
                     lambda.alphabet().words_of_length(static_cast<std::size_t>(k)))
                    if (lambda.cylinder_prob(v) != 0.0) values[v] = lambda.cylinder_prob(v);
            j["values"] = values;
            break;
        }
    }
    return j;
}

SceneryMeasure scenery_measure_from_json(const json& j) {
    const std::string kind = require_string(j, "kind");
    ColourAlphabet alphabet = alphabet_of(j);
    if (kind == "periodic")
        return SceneryMeasure::periodic_orbit(require_string(j, "word"), std::move(alphabet));
    if (kind == "iid") {
        if (!j.contains("probs") || !j["probs"].is_array())
            throw ContractError("iid scenery json needs array field \"probs\"");
        std::vector<double> probs;
        for (const auto& p : j["probs"]) {
            if (!p.is_number()) throw ContractError("scenery probs must be numbers");
            probs.push_back(p.get<double>());
        }
        return SceneryMeasure::iid(std::move(probs), std::move(alphabet));
    }
    if (kind == "table") {
        if (!j.contains("depth") || !j["depth"].is_number_integer())
            throw ContractError("table scenery json needs integer field \"depth\"");
        return SceneryMeasure::table(value_map_of(j, "values"), j["depth"].get<int>(),
                                     std::move(alphabet));
    }
    throw ContractError("unknown scenery measure kind \"" + kind + "\"");
}

void write_vector_csv(std::ostream& os, const WordOrder& order,
                      const std::vector<double>& values) {
    if (values.size() != order.size())
        throw ContractError("write_vector_csv: order and values disagree in size");
    os << "word,length,value\n";
    for (std::size_t i = 0; i < order.size(); ++i)
        os << order.entries[i] << ',' << order.entries[i].size() << ','
           << format_double(values[i]) << '\n';
}

CylinderVector read_vector_csv(std::istream& is, const ColourAlphabet& alphabet) {
    std::string line;
    if (!std::getline(is, line) || split_csv_line(line) != std::vector<std::string>{
                                                              "word", "length", "value"})
        throw ContractError("vector csv must start with header word,length,value");
    std::map<std::string, double> rows;
    int depth = 0;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw ContractError("vector csv line " + std::to_string(lineno) +
                                ": expected 3 fields");
        const std::string& word = fields[0];
        if (!alphabet.contains_word(word))
            throw ContractError("vector csv line " + std::to_string(lineno) + ": word \"" + word +
                                "\" not over alphabet \"" + alphabet.symbols() + "\"");
        long len = -1;
        double value = 0.0;
        try {
            std::size_t used = 0;
            len = std::stol(fields[1], &used);
            if (used != fields[1].size()) len = -1;
            value = std::stod(fields[2], &used);
            if (used != fields[2].size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw ContractError("vector csv line " + std::to_string(lineno) +
                                ": bad numeric field");
        }
        if (len != static_cast<long>(word.size()))
            throw ContractError("vector csv line " + std::to_string(lineno) +
                                ": length column disagrees with the word");
        if (!rows.emplace(word, value).second)
            throw ContractError("vector csv line " + std::to_string(lineno) + ": word \"" + word +
                                "\" repeated");
        depth = std::max(depth, static_cast<int>(word.size()));
    }
    if (depth == 0) throw ContractError("vector csv has no rows");
    CylinderVector v;
    v.order = canonical_order(alphabet, depth);
    v.values.assign(v.order.size(), 0.0);
    if (rows.size() != v.order.size())
        throw ContractError("vector csv must list every word up to depth " +
                            std::to_string(depth) + " exactly once");
    for (const auto& [word, value] : rows) v.values[v.order.index_of(word)] = value;
    return v;
}

void write_matrix_csv(std::ostream& os, const ReconMatrix& a) {
    os << "row,col,value\n";
    for (std::size_t row = 0; row < a.size(); ++row)
        for (std::size_t col = 0; col < a.size(); ++col)
            if (a.at(row, col) != 0.0)
                os << a.order.entries[row] << ',' << a.order.entries[col] << ','
                   << format_double(a.at(row, col)) << '\n';
}

json blocks_to_json(const ReconMatrix& a) {
    json blocks = json::array();
    for (const DiagonalBlock& b : a.blocks) {
        json jb;
        jb["begin"] = b.begin;
        jb["size"] = b.size;
        jb["word_length"] = b.word_length;
        json words = json::array();
        for (std::size_t i = 0; i < b.size; ++i) words.push_back(a.order.entries[b.begin + i]);
        jb["words"] = words;
        blocks.push_back(jb);
    }
    json j;
    j["depth"] = a.order.depth;
    j["size"] = a.size();
    j["blocks"] = blocks;
    j["holding"] = a.holding;
    j["symmetric_form"] = a.symmetric_form;
    j["effective_rank"] = a.effective_rank;
    return j;
}

json violations_to_json(const std::vector<Violation>& violations) {
    json out = json::array();
    for (const Violation& v : violations) {
        json jv;
        jv["check"] = v.check;
        jv["where"] = v.where;
        jv["magnitude"] = v.magnitude;
        out.push_back(jv);
    }
    return out;
}

json structure_report_to_json(const StructureReport& report) {
    json j;
    j["ok"] = report.ok();
    j["violations"] = violations_to_json(report.violations);
    j["nonzero_below_blocks"] = report.nonzero_below_blocks;
    if (report.holding_comparison) {
        json hc;
        hc["baseline"] = report.holding_comparison->baseline;
        hc["variant"] = report.holding_comparison->variant;
        hc["baseline_nonzero_below"] = report.holding_comparison->baseline_nonzero_below;
        hc["variant_nonzero_below"] = report.holding_comparison->variant_nonzero_below;
        j["holding_comparison"] = hc;
    } else {
        j["holding_comparison"] = nullptr;
    }
    return j;
}

json verdict_to_json(const Verdict& verdict) {
    json j;
    j["regime"] = verdict.regime == Regime::Asymmetric ? "asymmetric" : "symmetric";
    // Ergodicity of the record law is taken for granted, not verified; the
    // verdict carries that caveat with it.
    j["assumptions"] = json::array({"ergodic global record measure"});
    switch (verdict.relation) {
        case Relation::Translate:
        case Relation::ReflectionEquivalent:
            j["relation"] = verdict.relation == Relation::Translate ? "translate"
                                                                    : "reflection_equivalent";
            j["shift"] = verdict.shift;
            j["reflected"] = verdict.reflected;
            j["certificate_word"] = nullptr;
            j["depth"] = nullptr;
            j["divergence"] = nullptr;
            j["value_x"] = nullptr;
            j["value_y"] = nullptr;
            break;
        case Relation::Distinguishable:
            j["relation"] = "distinguishable";
            j["shift"] = nullptr;
            j["reflected"] = nullptr;
            j["certificate_word"] = verdict.certificate_word;
            j["depth"] = verdict.depth;
            j["divergence"] = verdict.divergence;
            j["value_x"] = verdict.value_x;
            j["value_y"] = verdict.value_y;
            break;
    }
    return j;
}

void write_record_text(std::ostream& os, const RecordSequence& record) {
    os << record.colours << '\n';
}

RecordSequence read_record_text(std::istream& is, const ColourAlphabet& alphabet) {
    std::string line;
    if (!std::getline(is, line) || line.empty())
        throw ContractError("record file must start with one nonempty line of colours");
    if (!alphabet.contains_word(line))
        throw ContractError("record uses symbols outside alphabet \"" + alphabet.symbols() +
                            "\"");
    RecordSequence rec;
    rec.alphabet = alphabet;
    rec.colours = std::move(line);
    return rec;
}

}  // namespace rwrs
