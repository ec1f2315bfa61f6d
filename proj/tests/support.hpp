#pragma once

#include "myoctl/emg_source.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

// Plays back a fixed voltage sequence; an optional hook runs before sample k is returned.
class VectorSource final : public myoctl::SampleSource {
public:
    explicit VectorSource(std::vector<double> volts, std::function<void(std::size_t)> hook = {})
        : volts_(std::move(volts)), hook_(std::move(hook)) {}
    std::optional<double> next() override
    {
        if (i_ >= volts_.size())
            return std::nullopt;
        if (hook_)
            hook_(i_);
        return volts_[i_++];
    }
    std::string descriptor() const override { return "vector"; }

private:
    std::vector<double> volts_;
    std::function<void(std::size_t)> hook_;
    std::size_t i_ = 0;
};

inline std::filesystem::path temp_path(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("myoctl_test_" + name);
}

inline void write_file(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace testing
