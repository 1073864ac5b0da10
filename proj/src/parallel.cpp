#include "covercomm/parallel.hpp"

#include <cstdlib>
#include <string>

namespace covercomm {

int threads_from_environment()
{
    const char* value = std::getenv("COVERCOMM_THREADS");
    if (value == nullptr)
        return 1;
    try {
        const int n = std::stoi(value);
        return n > 0 ? n : 1;
    } catch (const std::exception&) {
        return 1;
    }
}

} // namespace covercomm
