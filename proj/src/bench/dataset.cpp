#include "hybridcast/bench/dataset.hpp"

#include "hybridcast/bench/sha256.hpp"
#include "hybridcast/core/errors.hpp"

namespace hybridcast::bench {

core::TimeSeries load_dataset(const DatasetDescriptor& descriptor) {
    if (descriptor.sha256) {
        const std::string actual = sha256_file(descriptor.path);
        if (actual != *descriptor.sha256)
            throw IoError("dataset " + descriptor.name + ": checksum mismatch for " +
                          descriptor.path + " (got " + actual + ")");
    }
    core::TimeSeries series = core::read_csv(descriptor.path, descriptor.name);
    if (descriptor.expected_len && series.size() != *descriptor.expected_len)
        throw IoError("dataset " + descriptor.name + ": expected " +
                      std::to_string(*descriptor.expected_len) + " observations, found " +
                      std::to_string(series.size()));
    if (descriptor.train_len >= series.size())
        throw ConfigError("dataset " + descriptor.name +
                          ": train_len must be below the series length");
    return core::apply_transform(series, descriptor.transform);
}

}  // namespace hybridcast::bench
