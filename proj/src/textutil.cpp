#include "restref/textutil.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace restref {

std::string to_lower_copy(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_identifier(const std::string& name) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(to_lower_copy(current));
            current.clear();
        }
    };
    for (std::size_t i = 0; i < name.size(); ++i) {
        char c = name[i];
        if (c == '_' || c == '-' || c == '.' || c == ' ') {
            flush();
            continue;
        }
        if (std::isupper(static_cast<unsigned char>(c)) && !current.empty() &&
            !std::isupper(static_cast<unsigned char>(current.back()))) {
            flush();
        }
        current.push_back(c);
    }
    flush();
    return tokens;
}

std::vector<std::string> tokenize_text(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            current.push_back(c);
        } else {
            if (!current.empty()) {
                // identifiers inside messages may themselves be camelCase
                for (auto& t : split_identifier(current)) tokens.push_back(std::move(t));
                tokens.push_back(to_lower_copy(current));
                current.clear();
            }
        }
    }
    if (!current.empty()) {
        for (auto& t : split_identifier(current)) tokens.push_back(std::move(t));
        tokens.push_back(to_lower_copy(current));
    }
    return tokens;
}

namespace {

bool token_matches(const std::string& a, const std::string& b) {
    if (a == b) return true;
    if (a.size() < 3 || b.size() < 3) return false;
    const std::string& shorter = a.size() <= b.size() ? a : b;
    const std::string& longer = a.size() <= b.size() ? b : a;
    return longer.compare(0, shorter.size(), shorter) == 0;
}

bool is_generic_token(const std::string& t) {
    return t == "id" || t == "ids";
}

}  // namespace

double name_overlap(const std::vector<std::string>& name_tokens,
                    const std::vector<std::string>& text_tokens) {
    if (name_tokens.empty()) return 0.0;
    std::vector<std::string> significant;
    for (const auto& t : name_tokens)
        if (!is_generic_token(t)) significant.push_back(t);
    const auto& pool = significant.empty() ? name_tokens : significant;
    int matched = 0;
    for (const auto& nt : pool) {
        bool hit = std::any_of(text_tokens.begin(), text_tokens.end(),
                               [&](const std::string& tt) { return token_matches(nt, tt); });
        if (hit) ++matched;
    }
    return static_cast<double>(matched) / static_cast<double>(pool.size());
}

std::string singularize(const std::string& word) {
    if (word.size() > 3 && word.compare(word.size() - 3, 3, "ies") == 0)
        return word.substr(0, word.size() - 3) + "y";
    if (word.size() > 2 && word.compare(word.size() - 2, 2, "es") == 0 &&
        (word[word.size() - 3] == 's' || word[word.size() - 3] == 'x'))
        return word.substr(0, word.size() - 2);
    if (word.size() > 1 && word.back() == 's' && word[word.size() - 2] != 's')
        return word.substr(0, word.size() - 1);
    return word;
}

bool contains_word(const std::string& haystack_lower, const std::string& word_lower) {
    std::size_t pos = 0;
    while ((pos = haystack_lower.find(word_lower, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(haystack_lower[pos - 1]));
        std::size_t end = pos + word_lower.size();
        bool right_ok =
            end >= haystack_lower.size() || !std::isalnum(static_cast<unsigned char>(haystack_lower[end]));
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

std::vector<std::string> quoted_literals(const std::string& text) {
    std::vector<std::string> out;
    static const std::regex quote_re(R"(['"]([^'"]+)['"])");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), quote_re);
         it != std::sregex_iterator(); ++it)
        out.push_back((*it)[1].str());
    return out;
}

}  // namespace restref
