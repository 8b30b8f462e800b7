#include "restref/analyzer.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <sstream>

#include "restref/textutil.hpp"

namespace restref {

const char* to_string(VerdictAction a) {
    switch (a) {
        case VerdictAction::AddConstraint: return "AddConstraint";
        case VerdictAction::RemoveOperation: return "RemoveOperation";
        case VerdictAction::RemoveParameter: return "RemoveParameter";
        case VerdictAction::RequestUserInput: return "RequestUserInput";
        case VerdictAction::ReportDefect: return "ReportDefect";
        case VerdictAction::RegenerateData: return "RegenerateData";
        case VerdictAction::Ignore: return "Ignore";
    }
    return "Ignore";
}

std::string strip_html(const std::string& body) {
    if (body.find('<') == std::string::npos) return body;
    std::string out;
    bool in_tag = false;
    for (char c : body) {
        if (c == '<') {
            in_tag = true;
        } else if (c == '>') {
            in_tag = false;
            if (!out.empty() && out.back() != ' ') out.push_back(' ');
        } else if (!in_tag) {
            out.push_back(c);
        }
    }
    // collapse runs of whitespace
    std::string collapsed;
    bool prev_space = false;
    for (char c : out) {
        bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (space && prev_space) continue;
        collapsed.push_back(space ? ' ' : c);
        prev_space = space;
    }
    while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
    while (!collapsed.empty() && collapsed.front() == ' ') collapsed.erase(collapsed.begin());
    return collapsed;
}

std::string normalize_message(const std::string& message) {
    static const std::regex email_re(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})");
    static const std::regex uuid_re(
        R"([0-9a-fA-F]{8}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{12})");
    static const std::regex quoted_re(R"(['"][^'"]*['"])");

    std::string s = std::regex_replace(message, email_re, "⟨EMAIL⟩");
    s = std::regex_replace(s, uuid_re, "⟨UUID⟩");
    s = std::regex_replace(s, quoted_re, "⟨STR⟩");
    // ECMAScript lookbehind is not portable; mask numbers token-wise instead.
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if ((std::isdigit(static_cast<unsigned char>(c)) ||
             (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) &&
            (i == 0 || (!std::isalnum(static_cast<unsigned char>(s[i - 1])) && s[i - 1] != '_'))) {
            std::size_t j = i + (c == '-' ? 1 : 0);
            while (j < s.size() &&
                   (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
            // trailing dot belongs to the sentence, not the number
            if (j > i && s[j - 1] == '.') --j;
            bool word_tail = j < s.size() && (std::isalpha(static_cast<unsigned char>(s[j])) || s[j] == '_');
            if (!word_tail) {
                out += "⟨NUM⟩";
                i = j;
                continue;
            }
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

namespace {

struct RelPattern {
    const char* phrase;
    RelOp op;
};

// Negated forms first so "cannot be less than" never matches "less than".
constexpr RelPattern kRelPatterns[] = {
    {"cannot be less than", RelOp::Ge},
    {"can not be less than", RelOp::Ge},
    {"must not be less than", RelOp::Ge},
    {"should not be less than", RelOp::Ge},
    {"cannot be greater than", RelOp::Le},
    {"must not be greater than", RelOp::Le},
    {"cannot exceed", RelOp::Le},
    {"must not exceed", RelOp::Le},
    {"may not exceed", RelOp::Le},
    {"must not equal", RelOp::Ne},
    {"cannot be equal to", RelOp::Ne},
    {"must be different from", RelOp::Ne},
    {"greater than or equal to", RelOp::Ge},
    {"less than or equal to", RelOp::Le},
    {"greater than", RelOp::Gt},
    {"more than", RelOp::Gt},
    {"larger than", RelOp::Gt},
    {"less than", RelOp::Lt},
    {"smaller than", RelOp::Lt},
    {"at least", RelOp::Ge},
    {"at most", RelOp::Le},
    {"surpass", RelOp::Gt},
    {"exceed", RelOp::Gt},
    {"must be after", RelOp::Gt},
    {"must be before", RelOp::Lt},
    {"must equal", RelOp::Eq},
    {"must be equal to", RelOp::Eq},
};

std::optional<std::pair<RelOp, std::size_t>> find_relational_verb(const std::string& lower) {
    for (const auto& p : kRelPatterns) {
        auto pos = lower.find(p.phrase);
        if (pos != std::string::npos) return std::make_pair(p.op, pos);
    }
    return std::nullopt;
}

bool has_presence_word(const std::string& lower) {
    for (const char* w : {"present", "specified", "specify", "provided", "given", "missing",
                          "absent", "omitted", "required", "supplied", "set", "too"})
        if (contains_word(lower, w)) return true;
    return false;
}

std::optional<double> number_word(const std::string& w) {
    static const std::map<std::string, double> words = {
        {"zero", 0},  {"one", 1},  {"two", 2},   {"three", 3}, {"four", 4}, {"five", 5},
        {"six", 6},   {"seven", 7}, {"eight", 8}, {"nine", 9},  {"ten", 10}};
    auto it = words.find(w);
    if (it == words.end()) return std::nullopt;
    return it->second;
}

bool mentions_not_found(const std::string& lower) {
    return lower.find("not found") != std::string::npos ||
           lower.find("could not be found") != std::string::npos ||
           lower.find("does not exist") != std::string::npos ||
           lower.find("doesn't exist") != std::string::npos ||
           lower.find("no such") != std::string::npos;
}

// Splits a conditional sentence into antecedent and consequent. Markers: an
// "if"/"when" clause closed by "then" or the first comma.
std::optional<std::pair<std::string, std::string>> split_conditional(const std::string& message) {
    std::string lower = to_lower_copy(message);
    std::size_t start = std::string::npos;
    std::size_t marker_len = 0;
    if (lower.rfind("if ", 0) == 0) {
        start = 0;
        marker_len = 3;
    } else if (lower.rfind("when ", 0) == 0) {
        start = 0;
        marker_len = 5;
    } else {
        auto p = lower.find(" if ");
        if (p != std::string::npos) {
            start = p + 1;
            marker_len = 3;
        } else {
            p = lower.find(" when ");
            if (p != std::string::npos) {
                start = p + 1;
                marker_len = 5;
            }
        }
    }
    if (start == std::string::npos) return std::nullopt;

    std::size_t body = start + marker_len;
    auto then_pos = lower.find(" then ", body);
    if (then_pos != std::string::npos) {
        return std::make_pair(message.substr(body, then_pos - body),
                              message.substr(then_pos + 6));
    }
    auto comma = message.find(',', body);
    if (comma != std::string::npos) {
        return std::make_pair(message.substr(body, comma - body), message.substr(comma + 1));
    }
    return std::nullopt;
}

bool clause_has_value_comparison(const std::string& clause) {
    std::string lower = to_lower_copy(clause);
    auto quotes = quoted_literals(clause);
    if (!quotes.empty()) {
        // "type is 'audio'", "type must be 'link'", "type set to 'auto'"
        for (const char* verb : {" is ", " equals ", " set to ", " must be ", " should be ", "="})
            if (lower.find(verb) != std::string::npos) return true;
    }
    if (find_relational_verb(lower)) return true;
    return false;
}

}  // namespace

ClauseKind classify_clause(const std::string& clause) {
    std::string lower = to_lower_copy(clause);
    // "at least one of ..." reads as a selection, not the `at least` relation
    if (lower.find("only one") != std::string::npos ||
        lower.find("exactly one") != std::string::npos ||
        lower.find("at least one of") != std::string::npos ||
        lower.find("all or none") != std::string::npos)
        return ClauseKind::Selection;
    if (clause_has_value_comparison(clause)) return ClauseKind::DataCondition;
    if (has_presence_word(lower)) return ClauseKind::PresenceCondition;
    return ClauseKind::Unknown;
}

ConstraintCategory FailureAnalyzer::classify_failure(const FailureRecord& f,
                                                     const Operation& op) const {
    const std::string message = strip_html(f.message);
    const std::string lower = to_lower_copy(message);

    // Status-code rules dominate the text.
    if (f.status == 401 || f.status == 403) return ConstraintCategory::ConfigurationAuthentication;
    if (f.status == 405) return ConstraintCategory::UnsupportedOperation;

    if (lower.find("api key") != std::string::npos || contains_word(lower, "unauthorized") ||
        contains_word(lower, "unauthenticated") || lower.find("access token") != std::string::npos ||
        lower.find("credential") != std::string::npos ||
        lower.find("authentication") != std::string::npos ||
        lower.find("authorization") != std::string::npos || contains_word(lower, "forbidden"))
        return ConstraintCategory::ConfigurationAuthentication;

    if (lower.find("method not allowed") != std::string::npos ||
        (lower.find("method") != std::string::npos &&
         (lower.find("not supported") != std::string::npos ||
          lower.find("not allowed") != std::string::npos)))
        return ConstraintCategory::UnsupportedOperation;

    if (lower.find("unknown parameter") != std::string::npos ||
        lower.find("unrecognized parameter") != std::string::npos ||
        lower.find("unexpected parameter") != std::string::npos ||
        lower.find("unknown field") != std::string::npos)
        return ConstraintCategory::ParameterUnknown;

    // Nested / conditional constraints before the single-category checks.
    if (auto halves = split_conditional(message)) {
        ClauseKind ante = classify_clause(halves->first);
        ClauseKind cons = classify_clause(halves->second);
        if (ante == ClauseKind::DataCondition &&
            (cons == ClauseKind::Selection || cons == ClauseKind::PresenceCondition))
            return ConstraintCategory::DataInfluencedParamSelection;
        if (ante == ClauseKind::PresenceCondition && cons == ClauseKind::DataCondition)
            return ConstraintCategory::ParameterInfluencedDataValues;
        if (ante == ClauseKind::PresenceCondition &&
            (cons == ClauseKind::PresenceCondition || cons == ClauseKind::Selection))
            return ConstraintCategory::ConditionalParameterRequired;
    }

    if (mentions_not_found(lower)) return ConstraintCategory::ProducerConsumer;

    if (lower.find("not both") != std::string::npos ||
        lower.find("only one") != std::string::npos ||
        lower.find("exactly one") != std::string::npos ||
        lower.find("one and only one") != std::string::npos)
        return ConstraintCategory::One;

    if ((contains_word(lower, "either") && contains_word(lower, "or")) ||
        lower.find("at least one") != std::string::npos ||
        lower.find("one of the") != std::string::npos)
        return ConstraintCategory::Or;

    if (lower.find("specified with") != std::string::npos ||
        lower.find("specified together") != std::string::npos ||
        lower.find("together with") != std::string::npos ||
        lower.find("must be provided together") != std::string::npos ||
        lower.find("all or none") != std::string::npos)
        return ConstraintCategory::AllOrNone;

    if (find_relational_verb(lower)) return ConstraintCategory::DataArithmetic;

    if (lower.find("is a required parameter") != std::string::npos ||
        lower.find("is a required field") != std::string::npos ||
        lower.find("required parameter") != std::string::npos ||
        lower.find("required field") != std::string::npos ||
        lower.find("is required") != std::string::npos ||
        lower.find("must be present") != std::string::npos ||
        lower.find("must be provided") != std::string::npos ||
        (lower.find("missing") != std::string::npos && lower.find("parameter") != std::string::npos))
        return ConstraintCategory::AdditionalMandatory;

    if (lower.find("not a valid") != std::string::npos ||
        lower.find("is not valid") != std::string::npos ||
        lower.find("supported values") != std::string::npos ||
        lower.find("allowed values") != std::string::npos ||
        lower.find("invalid value") != std::string::npos ||
        lower.find("already in use") != std::string::npos ||
        lower.find("already exists") != std::string::npos ||
        lower.find("must be unique") != std::string::npos ||
        lower.find("invalid format") != std::string::npos)
        return ConstraintCategory::DataNonArithmetic;

    if (fallback_) {
        nlohmann::json context{{"operation", op.opname}, {"method", to_string(op.method)}};
        try {
            if (auto c = fallback_->classify(message, f.status, context)) return *c;
        } catch (const std::exception&) {
            // BackendUnavailable: degrade to the rule-based result.
        }
    }
    return ConstraintCategory::Unhandled;
}

std::vector<std::string> FailureAnalyzer::identify_target_parameters(
    const std::string& message, const std::vector<const InputParameter*>& candidates) const {
    const std::string stripped = strip_html(message);
    const std::string lower = to_lower_copy(stripped);

    struct Scored {
        const InputParameter* p;
        double score;
    };
    std::vector<Scored> exact, relaxed, overlap;

    auto text_tokens = tokenize_text(stripped);
    for (const auto* p : candidates) {
        if (p->tombstoned) continue;
        // leaf name of dotted body paths
        std::string leaf = p->pname;
        if (auto dot = leaf.find_last_of('.'); dot != std::string::npos) leaf = leaf.substr(dot + 1);

        if (contains_word(lower, to_lower_copy(leaf)) &&
            stripped.find(leaf) != std::string::npos) {
            exact.push_back({p, 1.0});
            continue;
        }
        std::string squashed = to_lower_copy(leaf);
        squashed.erase(std::remove_if(squashed.begin(), squashed.end(),
                                      [](char c) { return c == '_' || c == '-'; }),
                       squashed.end());
        std::string lower_squashed = lower;
        lower_squashed.erase(std::remove_if(lower_squashed.begin(), lower_squashed.end(),
                                            [](char c) { return c == '_' || c == '-'; }),
                             lower_squashed.end());
        if (contains_word(lower_squashed, squashed)) {
            relaxed.push_back({p, 0.9});
            continue;
        }
        double s = name_overlap(split_identifier(leaf), text_tokens);
        if (s >= 0.6) overlap.push_back({p, s});
    }

    auto rank = [](std::vector<Scored>& v) {
        std::sort(v.begin(), v.end(), [](const Scored& a, const Scored& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.p->id < b.p->id;
        });
    };
    std::vector<Scored>* chosen = nullptr;
    if (!exact.empty())
        chosen = &exact;
    else if (!relaxed.empty())
        chosen = &relaxed;
    else if (!overlap.empty())
        chosen = &overlap;

    std::vector<std::string> out;
    if (chosen) {
        rank(*chosen);
        for (const auto& s : *chosen) out.push_back(s.p->id);
        return out;
    }

    if (fallback_) {
        std::vector<std::string> names;
        for (const auto* p : candidates)
            if (!p->tombstoned) names.push_back(p->pname);
        try {
            auto picked = fallback_->match_entities(stripped, names);
            for (const auto& name : picked)
                for (const auto* p : candidates)
                    if (p->pname == name) out.push_back(p->id);
        } catch (const std::exception&) {
        }
    }
    return out;
}

namespace {

bool is_stopword(const std::string& w) {
    for (const char* s : {"the", "a", "an", "with", "for", "of", "to", "was", "is", "be", "been",
                          "were", "id", "this", "that", "given", "requested", "specified"})
        if (w == s) return true;
    return false;
}

// The resource noun a not-found message talks about ("Order Not Found" ->
// "order"). Falls back to empty when nothing usable precedes the phrase.
std::string extract_resource_noun(const std::string& message) {
    std::string lower = to_lower_copy(normalize_message(message));
    static const char* phrases[] = {"could not be found", "not found", "does not exist",
                                    "doesn't exist"};
    std::size_t pos = std::string::npos;
    for (const char* ph : phrases) {
        auto p = lower.find(ph);
        if (p != std::string::npos && (pos == std::string::npos || p < pos)) pos = p;
    }
    std::string head = pos == std::string::npos ? lower : lower.substr(0, pos);
    auto tokens = tokenize_text(head);
    for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
        if (is_stopword(*it)) continue;
        // tokens left behind by masking placeholders
        if (*it == "str" || *it == "num" || *it == "uuid" || *it == "email") continue;
        if (std::all_of(it->begin(), it->end(),
                        [](unsigned char c) { return std::isalpha(c) != 0; }))
            return singularize(*it);
    }
    return "";
}

std::string id_param_noun(const Operation& op) {
    for (const auto& p : op.inputs) {
        if (p.tombstoned) continue;
        auto tokens = split_identifier(p.pname);
        if (tokens.size() > 1 && tokens.back() == "id") {
            std::string noun;
            for (std::size_t i = 0; i + 1 < tokens.size(); ++i) noun += tokens[i];
            return noun;
        }
    }
    return "";
}

bool has_identifier_input(const Operation& op) {
    for (const auto& p : op.inputs) {
        if (p.tombstoned) continue;
        if (p.loc == ParamLoc::Path) return true;
        auto tokens = split_identifier(p.pname);
        if (!tokens.empty() && tokens.back() == "id") return true;
    }
    return false;
}

bool is_2xx_code(const std::string& code) {
    if (code == "default") return true;
    return code.size() == 3 && code[0] == '2';
}

}  // namespace

std::optional<ProducerConsumerConstraint> FailureAnalyzer::infer_producer_consumer(
    const FailureRecord& f, const Operation& consumer, const SpecModel& model) const {
    std::string noun = extract_resource_noun(strip_html(f.message));
    if (noun.empty()) noun = id_param_noun(consumer);
    if (noun.empty() && !consumer.inputs.empty()) {
        // last resort: the operation's own name minus the verb
        auto tokens = split_identifier(consumer.opname);
        if (tokens.size() > 1) noun = singularize(tokens.back());
    }
    if (noun.empty()) return std::nullopt;

    // Consumer parameter: the identifier-like input best matching the noun.
    const InputParameter* consumer_param = nullptr;
    int best = -1;
    for (const auto& p : consumer.inputs) {
        if (p.tombstoned) continue;
        auto tokens = split_identifier(p.pname);
        int score = 0;
        bool id_like = p.loc == ParamLoc::Path ||
                       (!tokens.empty() && tokens.back() == "id") ||
                       name_overlap({"id"}, tokens) > 0;
        for (const auto& t : tokens)
            if (t == noun || (t.size() >= 3 && noun.size() >= 3 &&
                              (t.rfind(noun, 0) == 0 || noun.rfind(t, 0) == 0)))
                score += 2;
        if (id_like) score += 1;
        if (score > best && (id_like || score >= 2)) {
            best = score;
            consumer_param = &p;
        }
    }
    if (!consumer_param) return std::nullopt;

    // Producer: the POST operation most associated with the noun.
    const Operation* producer = nullptr;
    int best_prod = 0;
    for (const auto& op : model.operations) {
        if (op.method != HttpMethod::Post || op.opname == consumer.opname) continue;
        int score = 0;
        auto name_tokens = split_identifier(op.opname);
        for (const auto& t : name_tokens)
            if (singularize(t) == noun) score += 3;
        auto path_tokens = tokenize_text(op.path);
        for (const auto& t : path_tokens)
            if (singularize(t) == noun) score += 2;
        for (const auto& o : op.outputs) {
            auto out_tokens = split_identifier(o.pname);
            for (const auto& t : out_tokens)
                if (singularize(t) == noun) score += 1;
        }
        if (score > best_prod) {
            best_prod = score;
            producer = &op;
        }
    }
    if (!producer) return std::nullopt;

    // Producer parameter: the id-like output field of a 2xx response.
    std::string code = "200";
    std::string field;
    int field_score = -1;
    for (const auto& o : producer->outputs) {
        if (!is_2xx_code(o.responsecode)) continue;
        auto tokens = split_identifier(o.pname);
        int score = 0;
        if (o.pname == "id") score = 3;
        else if (!tokens.empty() && tokens.back() == "id") score = 2;
        else if (std::find(tokens.begin(), tokens.end(), "id") != tokens.end()) score = 1;
        if (score > field_score) {
            field_score = score;
            field = o.pname;
            code = o.responsecode == "default" ? "200" : o.responsecode;
        }
    }
    if (field.empty()) field = "id";  // undeclared response schema

    ProducerConsumerConstraint pc;
    pc.producer_op = producer->opname;
    pc.producer_param_path = producer->opname + "." + code + "." + field;
    pc.consumer_op = consumer.opname;
    pc.consumer_param_id = consumer_param->id;
    return pc;
}

std::optional<Constraint> FailureAnalyzer::extract_relational_constraint(
    const std::string& message, const std::vector<std::string>& target_ids,
    const Operation& op) const {
    const std::string stripped = strip_html(message);
    const std::string lower = to_lower_copy(stripped);

    auto param_name = [&](const std::string& id) -> std::string {
        if (const auto* p = op.find_input(id)) return p->pname;
        return id;
    };

    // Non-arithmetic shapes first.
    if (lower.find("already in use") != std::string::npos ||
        lower.find("already exists") != std::string::npos ||
        lower.find("must be unique") != std::string::npos ||
        lower.find("already taken") != std::string::npos) {
        if (target_ids.empty()) return std::nullopt;
        return Constraint{
            DataNonArithmeticConstraint{target_ids.front(), DataProperty::Unique, {}}};
    }
    auto supported_pos = lower.find("supported values");
    if (supported_pos == std::string::npos) supported_pos = lower.find("allowed values");
    if (supported_pos == std::string::npos) supported_pos = lower.find("valid values");
    if (supported_pos != std::string::npos) {
        if (target_ids.empty()) return std::nullopt;
        auto values = quoted_literals(stripped.substr(supported_pos));
        if (values.empty()) return std::nullopt;
        return Constraint{
            DataNonArithmeticConstraint{target_ids.front(), DataProperty::Categorical, values}};
    }
    if (lower.find("not a valid") != std::string::npos ||
        lower.find("invalid value") != std::string::npos ||
        lower.find("invalid format") != std::string::npos ||
        lower.find("is not valid") != std::string::npos) {
        if (target_ids.empty()) return std::nullopt;
        // format hints: "must be a valid email", "invalid date format"
        for (const char* fmt : {"email", "date", "url", "uuid", "ipv4", "ipv6"})
            if (contains_word(lower, fmt))
                return Constraint{DataNonArithmeticConstraint{
                    target_ids.front(), DataProperty::Format, {fmt}}};
        return Constraint{
            DataNonArithmeticConstraint{target_ids.front(), DataProperty::Categorical, {}}};
    }

    // Arithmetic: the subject of the comparison verb is the left operand.
    auto rel = find_relational_verb(lower);
    std::optional<RelOp> relop;
    std::size_t verb_pos = 0;
    if (rel) {
        relop = rel->first;
        verb_pos = rel->second;
    } else {
        // equality against a quoted value: "type must be 'link'", "x is 'y'"
        auto quotes = quoted_literals(stripped);
        if (!quotes.empty()) {
            for (const char* verb : {" must be ", " should be ", " is ", " equals ", " set to "}) {
                auto p = lower.find(verb);
                if (p != std::string::npos) {
                    relop = RelOp::Eq;
                    verb_pos = p;
                    break;
                }
            }
        }
        if (!relop) return std::nullopt;
    }

    std::string lhs_id, rhs_param_id;
    for (const auto& id : target_ids) {
        std::string name = to_lower_copy(param_name(id));
        // position of the parameter mention in the message
        auto pos = lower.find(name);
        if (pos == std::string::npos) {
            // fuzzy position: first matching token
            pos = 0;
        }
        if (pos < verb_pos && lhs_id.empty())
            lhs_id = id;
        else if (pos >= verb_pos && rhs_param_id.empty() && id != lhs_id)
            rhs_param_id = id;
    }
    if (lhs_id.empty() && !target_ids.empty()) lhs_id = target_ids.front();
    if (lhs_id.empty()) return std::nullopt;

    DataArithmeticConstraint d;
    d.lhs_param_id = lhs_id;
    d.op = *relop;
    if (!rhs_param_id.empty()) {
        d.rhs = ParamRef{rhs_param_id};
        return Constraint{d};
    }
    // constant right operand: digits, number words, or a quoted literal
    std::string tail = lower.substr(verb_pos);
    static const std::regex num_re(R"(-?\d+(\.\d+)?)");
    std::smatch m;
    if (std::regex_search(tail, m, num_re)) {
        d.rhs = std::stod(m.str());
        return Constraint{d};
    }
    for (const auto& tok : tokenize_text(tail)) {
        if (auto n = number_word(tok)) {
            d.rhs = *n;
            return Constraint{d};
        }
    }
    auto quotes = quoted_literals(stripped.substr(verb_pos));
    if (!quotes.empty()) {
        if (quotes.size() == 1)
            d.rhs = quotes.front();
        else
            d.rhs = quotes;
        return Constraint{d};
    }
    return std::nullopt;  // AmbiguousRelation
}

namespace {

bool clause_presence_polarity(const std::string& clause_lower) {
    if (clause_lower.find("absent") != std::string::npos ||
        clause_lower.find("omitted") != std::string::npos ||
        clause_lower.find("not specified") != std::string::npos ||
        clause_lower.find("not present") != std::string::npos ||
        clause_lower.find("not provided") != std::string::npos ||
        clause_lower.find("not given") != std::string::npos ||
        clause_lower.find("missing") != std::string::npos)
        return false;
    return true;
}

}  // namespace

std::optional<Constraint> FailureAnalyzer::split_nested_constraint(const std::string& message,
                                                                   const Operation& op,
                                                                   const SpecModel& model) const {
    (void)model;
    auto halves = split_conditional(strip_html(message));
    if (!halves) return std::nullopt;  // NoConditionalMarker
    const std::string& ante = halves->first;
    const std::string& cons = halves->second;

    std::vector<const InputParameter*> candidates;
    for (const auto& p : op.inputs)
        if (!p.tombstoned) candidates.push_back(&p);

    auto ante_targets = identify_target_parameters(ante, candidates);
    auto cons_targets = identify_target_parameters(cons, candidates);
    ClauseKind ante_kind = classify_clause(ante);
    ClauseKind cons_kind = classify_clause(cons);

    if (ante_kind == ClauseKind::PresenceCondition &&
        (cons_kind == ClauseKind::PresenceCondition || cons_kind == ClauseKind::Selection) &&
        !clause_has_value_comparison(cons)) {
        // plain conditional-required: p2 present/absent implies p1 present/absent
        if (ante_targets.empty() || cons_targets.empty()) return std::nullopt;
        ConditionalRequiredConstraint cc;
        cc.p2_id = ante_targets.front();
        cc.p2_present = clause_presence_polarity(to_lower_copy(ante));
        cc.p1_id = cons_targets.front();
        cc.p1_present = clause_presence_polarity(to_lower_copy(cons));
        return Constraint{cc};
    }

    if (ante_kind == ClauseKind::DataCondition) {
        auto data = extract_relational_constraint(ante, ante_targets, op);
        if (!data) return std::nullopt;
        auto* arith = std::get_if<DataArithmeticConstraint>(&*data);
        if (!arith) return std::nullopt;

        std::string cons_lower = to_lower_copy(cons);
        ParamSelection selection;
        if (cons_lower.find("only one") != std::string::npos ||
            cons_lower.find("exactly one") != std::string::npos) {
            std::vector<std::string> members = cons_targets;
            if (members.size() < 2 && cons_lower.find("other") != std::string::npos) {
                // "the other two parameters": everything but the antecedent's
                members.clear();
                for (const auto* p : candidates)
                    if (std::find(ante_targets.begin(), ante_targets.end(), p->id) ==
                        ante_targets.end())
                        members.push_back(p->id);
            }
            if (members.size() < 2) return std::nullopt;
            selection = OneConstraint{members};
        } else if (cons_lower.find("at least one") != std::string::npos) {
            std::vector<std::string> members = cons_targets;
            if (members.size() < 2) return std::nullopt;
            selection = OrConstraint{members};
        } else {
            if (cons_targets.empty()) return std::nullopt;
            selection = ParamPresence{cons_targets.front(),
                                      clause_presence_polarity(cons_lower)};
        }
        return Constraint{DataInfluencedSelectionConstraint{*arith, selection}};
    }

    if (ante_kind == ClauseKind::PresenceCondition && cons_kind == ClauseKind::DataCondition) {
        if (ante_targets.empty()) return std::nullopt;
        auto data = extract_relational_constraint(cons, cons_targets, op);
        if (!data) return std::nullopt;
        auto* arith = std::get_if<DataArithmeticConstraint>(&*data);
        if (!arith) return std::nullopt;
        ParamSelection antecedent = ParamPresence{
            ante_targets.front(), clause_presence_polarity(to_lower_copy(ante))};
        return Constraint{ParamInfluencedDataConstraint{antecedent, *arith}};
    }

    return std::nullopt;
}

AnalyzerVerdict FailureAnalyzer::handle_blank_response(const FailureRecord& f, const Operation& op,
                                                       const SpecModel& model) const {
    AnalyzerVerdict v;
    if (f.status == 404 && has_identifier_input(op)) {
        if (auto pc = infer_producer_consumer(f, op, model)) {
            v.category = ConstraintCategory::ProducerConsumer;
            v.constraint = Constraint{*pc};
            v.action = VerdictAction::AddConstraint;
            return v;
        }
    }
    // other blank 4xx: assumed a data issue, regenerate next iteration
    v.category = ConstraintCategory::Unhandled;
    v.action = VerdictAction::RegenerateData;
    v.target_op = op.opname;
    v.note = "blank response treated as data issue";
    return v;
}

AnalyzerVerdict FailureAnalyzer::analyze(const FailureRecord& f, const Operation& op,
                                         const SpecModel& model) const {
    AnalyzerVerdict v;
    const std::string message = strip_html(f.message);
    bool blank = std::all_of(message.begin(), message.end(),
                             [](unsigned char c) { return std::isspace(c) != 0; });
    if (blank) return handle_blank_response(f, op, model);

    v.category = classify_failure(f, op);

    std::vector<const InputParameter*> candidates;
    for (const auto& p : op.inputs)
        if (!p.tombstoned) candidates.push_back(&p);

    auto downgrade = [&](const std::string& why) {
        v.category = ConstraintCategory::Unhandled;
        v.constraint.reset();
        v.action = VerdictAction::ReportDefect;
        v.note = why;
        return v;
    };

    switch (v.category) {
        case ConstraintCategory::ConfigurationAuthentication:
            v.action = VerdictAction::RequestUserInput;
            v.target_op = op.opname;
            return v;
        case ConstraintCategory::UnsupportedOperation:
            v.action = VerdictAction::RemoveOperation;
            v.target_op = op.opname;
            return v;
        case ConstraintCategory::ParameterUnknown: {
            auto targets = identify_target_parameters(message, candidates);
            if (targets.empty()) return downgrade("unknown-parameter target not identified");
            v.action = VerdictAction::RemoveParameter;
            v.target_param = targets.front();
            return v;
        }
        case ConstraintCategory::ProducerConsumer: {
            auto pc = infer_producer_consumer(f, op, model);
            if (!pc) return downgrade("no producer operation found");
            v.constraint = Constraint{*pc};
            v.action = VerdictAction::AddConstraint;
            return v;
        }
        case ConstraintCategory::AdditionalMandatory: {
            auto targets = identify_target_parameters(message, candidates);
            if (targets.empty()) return downgrade("required-parameter target not identified");
            v.constraint = Constraint{AdditionalMandatoryConstraint{targets.front()}};
            v.action = VerdictAction::AddConstraint;
            return v;
        }
        case ConstraintCategory::Or:
        case ConstraintCategory::One:
        case ConstraintCategory::AllOrNone: {
            auto targets = identify_target_parameters(message, candidates);
            if (targets.size() < 2) return downgrade("selection constraint needs two parameters");
            std::sort(targets.begin(), targets.end());
            if (v.category == ConstraintCategory::Or)
                v.constraint = Constraint{OrConstraint{targets}};
            else if (v.category == ConstraintCategory::One)
                v.constraint = Constraint{OneConstraint{targets}};
            else
                v.constraint = Constraint{AllOrNoneConstraint{targets}};
            v.action = VerdictAction::AddConstraint;
            return v;
        }
        case ConstraintCategory::ConditionalParameterRequired:
        case ConstraintCategory::DataInfluencedParamSelection:
        case ConstraintCategory::ParameterInfluencedDataValues: {
            auto c = split_nested_constraint(message, op, model);
            if (!c) return downgrade("conditional constraint could not be split");
            v.constraint = c;
            v.category = category_of(*c);
            v.action = VerdictAction::AddConstraint;
            return v;
        }
        case ConstraintCategory::DataArithmetic:
        case ConstraintCategory::DataNonArithmetic: {
            auto targets = identify_target_parameters(message, candidates);
            if (targets.empty()) return downgrade("data constraint target not identified");
            auto c = extract_relational_constraint(message, targets, op);
            if (!c) return downgrade("relation could not be extracted");
            v.constraint = c;
            v.category = category_of(*c);
            v.action = VerdictAction::AddConstraint;
            return v;
        }
        case ConstraintCategory::Unhandled:
            v.action = VerdictAction::ReportDefect;
            return v;
    }
    return v;
}

}  // namespace restref
