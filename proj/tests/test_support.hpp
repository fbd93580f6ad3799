#ifndef RMODE_TEST_SUPPORT_HPP
#define RMODE_TEST_SUPPORT_HPP

#include <string>

#ifndef RMODE_DATA_DIR
#define RMODE_DATA_DIR "data"
#endif

inline std::string data_path(const std::string& rel) {
    return std::string(RMODE_DATA_DIR) + "/" + rel;
}

#endif
