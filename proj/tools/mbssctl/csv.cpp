#include "csv.hpp"

#include <cstdio>
#include <memory>
#include <stdexcept>

namespace mbssctl {

void write_trace_csv(const mbss::sim::SimTrace& trace, const std::string& path) {
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(std::fopen(path.c_str(), "w"),
                                                      std::fclose);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "' for writing");

    const bool est = trace.has_estimate();
    std::fputs(est ? "t,x1,x2,x3,u,y,xh1,xh2,xh3\n" : "t,x1,x2,x3,u,y\n", f.get());

    char line[384];
    for (std::size_t i = 0; i < trace.size(); ++i) {
        int len;
        if (est) {
            len = std::snprintf(line, sizeof line,
                                "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                                trace.t[i], trace.x1[i], trace.x2[i], trace.x3[i], trace.u[i],
                                trace.y[i], trace.xh1[i], trace.xh2[i], trace.xh3[i]);
        } else {
            len = std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                                trace.t[i], trace.x1[i], trace.x2[i], trace.x3[i], trace.u[i],
                                trace.y[i]);
        }
        if (len < 0 || std::fwrite(line, 1, static_cast<std::size_t>(len), f.get()) !=
                           static_cast<std::size_t>(len))
            throw std::runtime_error("write failed for '" + path + "'");
    }
    if (std::fflush(f.get()) != 0)
        throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace mbssctl
