#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace test_helpers {

inline std::vector<double> logspace(double lo, double hi, int count) {
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        grid[i] = lo * std::pow(hi / lo, f);
    }
    return grid;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline std::string temp_path(const std::string& name) {
    const char* base = std::getenv("TMPDIR");
    return std::string(base ? base : "/tmp") + "/" + name;
}

struct ScopedEnv {
    std::string key;
    std::string old_value;
    bool had_old;

    ScopedEnv(const std::string& k, const std::string& v) : key(k) {
        const char* old = std::getenv(key.c_str());
        had_old = old != nullptr;
        if (had_old) old_value = old;
        setenv(key.c_str(), v.c_str(), 1);
    }

    ~ScopedEnv() {
        if (had_old) {
            setenv(key.c_str(), old_value.c_str(), 1);
        } else {
            unsetenv(key.c_str());
        }
    }
};

}  // namespace test_helpers
