#include "rwbandit/rng.hpp"

namespace rwb {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t master, std::uint64_t run, Stream purpose)
{
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ (run * 0xd1b54a32d192ed03ULL));
    s = splitmix64(s ^ static_cast<std::uint64_t>(purpose));
    return Rng(s);
}

double Rng::normal(double mean, double stddev)
{
    return mean + stddev * normal_(engine_);
}

}  // namespace rwb
