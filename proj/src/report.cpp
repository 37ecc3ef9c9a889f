#include "lpdo/report.hpp"

namespace lpdo {

namespace {

void dump_text(const Report& r, std::string& out, int indent, bool in_array) {
    std::string pad(static_cast<size_t>(indent) * 2, ' ');
    if (r.is_object()) {
        bool first = true;
        for (auto it = r.begin(); it != r.end(); ++it) {
            std::string lead = pad;
            if (in_array && first) lead = pad.substr(0, pad.size() >= 2 ? pad.size() - 2 : 0) + "- ";
            first = false;
            if (it->is_object() || it->is_array()) {
                out += lead + it.key() + ":\n";
                dump_text(*it, out, indent + 1, false);
            } else {
                Report v = *it;
                std::string sv = v.is_string() ? v.get<std::string>() : v.dump();
                out += lead + it.key() + ": " + sv + "\n";
            }
        }
        if (r.empty()) out += pad + (in_array ? "- {}\n" : "{}\n");
    } else if (r.is_array()) {
        if (r.empty()) {
            out += pad + "(none)\n";
            return;
        }
        for (const auto& item : r) {
            if (item.is_object()) {
                dump_text(item, out, indent + 1, true);
            } else if (item.is_array()) {
                out += pad + "-\n";
                dump_text(item, out, indent + 1, false);
            } else {
                Report v = item;
                std::string sv = v.is_string() ? v.get<std::string>() : v.dump();
                out += pad + "- " + sv + "\n";
            }
        }
    } else {
        Report v = r;
        std::string sv = v.is_string() ? v.get<std::string>() : v.dump();
        out += pad + sv + "\n";
    }
}

}  // namespace

std::string report_to_text(const Report& r) {
    std::string out;
    dump_text(r, out, 0, false);
    return out;
}

std::string report_to_json(const Report& r) { return r.dump(2) + "\n"; }

}  // namespace lpdo
