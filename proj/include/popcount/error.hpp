#pragma once

#include <stdexcept>
#include <string>

namespace popcount
{
    // Base of every error raised by the library.
    class error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Interaction pair with out-of-range or repeated mobile indices.
    class invalid_pair : public error
    {
    public:
        using error::error;
    };

    // Configuration holds Bit states where the protocol expects Name states, or the reverse.
    class tag_mismatch : public error
    {
    public:
        using error::error;
    };

    // The naming sequence would hand out a name >= P: the population is larger than the bound.
    class name_overflow : public error
    {
    public:
        using error::error;
    };

    class incompatible_protocol : public error
    {
    public:
        using error::error;
    };

    // Exact computation requested beyond the size the solver supports.
    class intractable : public error
    {
    public:
        using error::error;
    };

    class all_trials_truncated : public error
    {
    public:
        using error::error;
    };
} // namespace popcount
