#include <algorithm>
#include <thread>

#include "ragqa/acquisition/crawler.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::acquisition {
namespace {

// Glob match supporting '*' (any run) and a trailing '$' (end anchor).
// Without '$' the pattern is a prefix match.
bool robots_match(std::string_view pattern, std::string_view path) {
    bool anchored = false;
    if (!pattern.empty() && pattern.back() == '$') {
        anchored = true;
        pattern.remove_suffix(1);
    }
    std::size_t p = 0;
    std::size_t s = 0;
    std::size_t star = std::string_view::npos;
    std::size_t mark = 0;
    while (s < path.size()) {
        if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = s;
        } else if (p < pattern.size() && pattern[p] == path[s]) {
            ++p;
            ++s;
        } else if (p == pattern.size() && !anchored) {
            return true;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            s = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

}  // namespace

RobotsRules RobotsRules::parse(std::string_view robots_txt, std::string_view user_agent) {
    const std::string agent = text::to_lower_ascii(user_agent.substr(0, user_agent.find('/')));

    struct Group {
        std::vector<std::string> agents;
        std::vector<Rule> rules;
    };
    std::vector<Group> groups;
    bool last_was_agent = false;

    std::size_t start = 0;
    while (start < robots_txt.size()) {
        const auto nl = robots_txt.find('\n', start);
        std::string_view line = robots_txt.substr(start, nl == std::string_view::npos ? std::string_view::npos
                                                                                    : nl - start);
        start = nl == std::string_view::npos ? robots_txt.size() : nl + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) continue;
        const std::string field = text::to_lower_ascii(text::trim(line.substr(0, colon)));
        const std::string value(text::trim(line.substr(colon + 1)));
        if (field == "user-agent") {
            if (!last_was_agent || groups.empty()) groups.emplace_back();
            groups.back().agents.push_back(text::to_lower_ascii(value));
            last_was_agent = true;
        } else if (field == "allow" || field == "disallow") {
            last_was_agent = false;
            if (groups.empty()) continue;
            if (field == "disallow" && value.empty()) continue;  // empty Disallow allows everything
            groups.back().rules.push_back(Rule{value, field == "allow"});
        } else {
            last_was_agent = false;
        }
    }

    RobotsRules out;
    const Group* wildcard = nullptr;
    for (const auto& g : groups) {
        for (const auto& a : g.agents) {
            if (!agent.empty() && a != "*" && agent.find(a) != std::string::npos) {
                out.rules_ = g.rules;
                return out;
            }
            if (a == "*" && wildcard == nullptr) wildcard = &g;
        }
    }
    if (wildcard != nullptr) out.rules_ = wildcard->rules;
    return out;
}

bool RobotsRules::allowed(std::string_view path_and_query) const {
    const Rule* best = nullptr;
    for (const auto& r : rules_) {
        if (!robots_match(r.pattern, path_and_query)) continue;
        if (best == nullptr || r.pattern.size() > best->pattern.size() ||
            (r.pattern.size() == best->pattern.size() && r.allow)) {
            best = &r;
        }
    }
    return best == nullptr || best->allow;
}

std::chrono::steady_clock::time_point PolitenessGate::acquire(const std::string& host) {
    std::chrono::steady_clock::time_point start;
    {
        std::lock_guard lock(mu_);
        const auto now = std::chrono::steady_clock::now();
        auto it = next_allowed_.find(host);
        start = (it == next_allowed_.end() || it->second < now) ? now : it->second;
        next_allowed_[host] = start + delay_;
        log_.emplace_back(host, start);
    }
    std::this_thread::sleep_until(start);
    return start;
}

std::vector<std::pair<std::string, std::chrono::steady_clock::time_point>> PolitenessGate::log() const {
    std::lock_guard lock(mu_);
    return log_;
}

}  // namespace ragqa::acquisition
