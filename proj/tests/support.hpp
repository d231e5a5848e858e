#pragma once

#include "wpcn/config.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace testing {

inline const std::map<std::string, double>& golden()
{
    static const std::map<std::string, double> values = [] {
        std::map<std::string, double> out;
        std::ifstream in(WPCN_GOLDEN_FILE);
        if (!in)
            throw std::runtime_error("missing golden fixture " WPCN_GOLDEN_FILE);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#')
                continue;
            std::istringstream fields(line);
            std::string key;
            double value = 0.0;
            fields >> key >> value;
            out[key] = value;
        }
        return out;
    }();
    return values;
}

inline double gold(const std::string& key)
{
    return golden().at(key);
}

// coarse grid so that a full solve takes milliseconds
inline wpcn::ExperimentConfig small_config()
{
    wpcn::ExperimentConfig c;
    c.V_tauE = 3;
    c.V_tauI = 3;
    c.V_PE = 3;
    c.V_PI = 3;
    c.Bmax_ref = 4;
    c.Eth_ref = 500;
    return c;
}

} // namespace testing
