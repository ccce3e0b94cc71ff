#include <cstdio>
#include <iostream>
#include <string>

#include "ringspectra/cli/verify.hpp"

using namespace ringspectra::cli;

int main() {
    VerifyOptions opt;
    opt.bound = 10000;
    opt.workers = 1;
    opt.seed = 1;
    opt.progress = [](const Claim& c) {
        std::string detail = c.measured.dump();
        if (detail.size() > 240) detail = detail.substr(0, 237) + "...";
        std::printf("criterion %s: %s (%.2fs) %s\n", c.id.substr(1).c_str(), c.status == Status::Pass ? "PASS" : "FAIL",
                    c.seconds, detail.c_str());
        if (!c.exceptions.empty()) {
            std::printf("  exceptions:");
            for (auto p : c.exceptions) std::printf(" %llu", static_cast<unsigned long long>(p));
            std::printf("\n");
        }
        std::fflush(stdout);
    };
    const VerificationReport rep = verify_suite(opt);
    std::size_t failed = 0;
    for (const auto& c : rep.claims) failed += c.status == Status::Fail;
    std::printf("%zu of %zu criteria passed\n", rep.claims.size() - failed, rep.claims.size());
    return failed == 0 ? 0 : 1;
}
