#include "phq/dsp.hpp"

#include <algorithm>
#include <cmath>

#include "phq/error.hpp"

namespace phq {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> make_window(const std::string& kind, int n) {
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  if (kind == "rect") return w;
  if (kind == "hann") {
    for (int i = 0; i < n; ++i)
      w[static_cast<std::size_t>(i)] =
          0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n - 1));
    return w;
  }
  throw Error(ErrorKind::kParameter, "unknown window: " + kind);
}

}  // namespace

int FrameSpec::frame_samples(int sample_rate) const {
  return static_cast<int>(std::lround(frame_length * sample_rate));
}

int FrameSpec::hop_samples(int sample_rate) const {
  return static_cast<int>(std::lround(hop * sample_rate));
}

void FrameSpec::validate(int sample_rate) const {
  if (hop <= 0.0 || hop > frame_length)
    throw Error(ErrorKind::kParameter, "frame spec requires 0 < hop <= frame_length");
  if (!is_power_of_two(fft_size))
    throw Error(ErrorKind::kParameter, "fft_size must be a power of two");
  if (fft_size < frame_samples(sample_rate))
    throw Error(ErrorKind::kParameter, "fft_size smaller than the frame");
  make_window(window, 8);  // validates the identifier
}

double hz_to_mel(double f) {
  if (f < 0.0) throw Error(ErrorKind::kParameter, "negative frequency");
  return 2595.0 * std::log10(1.0 + f / 700.0);
}

double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

MelBank MelBank::make(int n_filters, double low_hz, double high_hz, int fft_size,
                      int sample_rate) {
  if (n_filters < 1 || low_hz < 0.0 || high_hz <= low_hz ||
      high_hz > sample_rate / 2.0 || !is_power_of_two(fft_size))
    throw Error(ErrorKind::kParameter, "invalid mel bank configuration");

  MelBank bank;
  bank.n_filters = n_filters;
  bank.low_hz = low_hz;
  bank.high_hz = high_hz;
  bank.fft_size = fft_size;
  bank.sample_rate = sample_rate;

  const double mlo = hz_to_mel(low_hz), mhi = hz_to_mel(high_hz);
  std::vector<double> edges(static_cast<std::size_t>(n_filters) + 2);
  for (int i = 0; i < n_filters + 2; ++i)
    edges[static_cast<std::size_t>(i)] =
        mel_to_hz(mlo + (mhi - mlo) * static_cast<double>(i) / static_cast<double>(n_filters + 1));

  const long nbins = fft_size / 2 + 1;
  bank.weights.assign(static_cast<std::size_t>(n_filters) * static_cast<std::size_t>(nbins), 0.0);
  for (int m = 1; m <= n_filters; ++m) {
    const double f0 = edges[static_cast<std::size_t>(m - 1)];
    const double f1 = edges[static_cast<std::size_t>(m)];
    const double f2 = edges[static_cast<std::size_t>(m + 1)];
    bank.center_hz.push_back(f1);
    double row_sum = 0.0;
    for (long k = 0; k < nbins; ++k) {
      const double fk = static_cast<double>(sample_rate) * static_cast<double>(k) /
                        static_cast<double>(fft_size);
      double w = 0.0;
      if (fk > f0 && fk <= f1)
        w = (fk - f0) / (f1 - f0);
      else if (fk > f1 && fk < f2)
        w = (f2 - fk) / (f2 - f1);
      bank.weights[static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(nbins) +
                   static_cast<std::size_t>(k)] = w;
      row_sum += w;
    }
    if (row_sum <= 0.0)
      throw Error(ErrorKind::kParameter,
                  "mel filter " + std::to_string(m) +
                      " covers no FFT bin; increase fft_size or reduce n_filters");
  }
  return bank;
}

void fft_radix2(std::vector<double>& re, std::vector<double>& im) {
  const std::size_t n = re.size();
  if (n != im.size() || !is_power_of_two(static_cast<int>(n)))
    throw Error(ErrorKind::kParameter, "fft size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * M_PI / static_cast<double>(len);
    const double wr = std::cos(ang), wi = std::sin(ang);
    for (std::size_t i = 0; i < n; i += len) {
      double cr = 1.0, ci = 0.0;
      for (std::size_t k = 0; k < len / 2; ++k) {
        const double ur = re[i + k], ui = im[i + k];
        const double vr = re[i + k + len / 2] * cr - im[i + k + len / 2] * ci;
        const double vi = re[i + k + len / 2] * ci + im[i + k + len / 2] * cr;
        re[i + k] = ur + vr;
        im[i + k] = ui + vi;
        re[i + k + len / 2] = ur - vr;
        im[i + k + len / 2] = ui - vi;
        const double ncr = cr * wr - ci * wi;
        ci = cr * wi + ci * wr;
        cr = ncr;
      }
    }
  }
}

Tensor<float> stft_power(const AudioClip& clip, const FrameSpec& spec) {
  if (clip.sample_rate <= 0) throw Error(ErrorKind::kParameter, "sample rate must be positive");
  spec.validate(clip.sample_rate);
  const int frame = spec.frame_samples(clip.sample_rate);
  const int hop = spec.hop_samples(clip.sample_rate);
  const long n = static_cast<long>(clip.samples.size());
  if (n < frame)
    throw Error(ErrorKind::kInput, "clip shorter than one frame (" + std::to_string(n) + " < " +
                                       std::to_string(frame) + " samples)");
  const long n_frames = 1 + (n - frame) / hop;
  const long nbins = spec.fft_size / 2 + 1;
  const std::vector<double> window = make_window(spec.window, frame);

  Tensor<float> out({n_frames, nbins});
  std::vector<double> re(static_cast<std::size_t>(spec.fft_size));
  std::vector<double> im(static_cast<std::size_t>(spec.fft_size));
  for (long f = 0; f < n_frames; ++f) {
    std::fill(re.begin(), re.end(), 0.0);
    std::fill(im.begin(), im.end(), 0.0);
    const long base = f * hop;
    for (int i = 0; i < frame; ++i)
      re[static_cast<std::size_t>(i)] =
          static_cast<double>(clip.samples[static_cast<std::size_t>(base + i)]) *
          window[static_cast<std::size_t>(i)];
    fft_radix2(re, im);
    float* row = out.row_ptr(f);
    for (long k = 0; k < nbins; ++k) {
      const double p = re[static_cast<std::size_t>(k)] * re[static_cast<std::size_t>(k)] +
                       im[static_cast<std::size_t>(k)] * im[static_cast<std::size_t>(k)];
      row[k] = static_cast<float>(p);
    }
  }
  return out;
}

Tensor<float> log_mel(const AudioClip& clip, const FrameSpec& spec, const MelBank& bank) {
  if (bank.fft_size != spec.fft_size)
    throw Error(ErrorKind::kParameter, "mel bank was built for a different fft_size");
  const Tensor<float> power = stft_power(clip, spec);
  const long n_frames = power.dim(0);
  const long nbins = power.dim(1);
  constexpr double kFloor = 1e-10;

  Tensor<float> out({n_frames, static_cast<long>(bank.n_filters)});
  for (long f = 0; f < n_frames; ++f) {
    const float* prow = power.row_ptr(f);
    float* orow = out.row_ptr(f);
    for (int m = 0; m < bank.n_filters; ++m) {
      double acc = 0.0;
      const double* wrow =
          bank.weights.data() + static_cast<std::size_t>(m) * static_cast<std::size_t>(nbins);
      for (long k = 0; k < nbins; ++k) acc += wrow[k] * static_cast<double>(prow[k]);
      orow[m] = static_cast<float>(std::log(acc + kFloor));
    }
  }
  return out;
}

Tensor<float> mfcc(const Tensor<float>& logmel, int n_coeffs) {
  if (logmel.rank() != 2) throw Error(ErrorKind::kDimension, "mfcc expects [frames, channels]");
  const long channels = logmel.dim(1);
  if (n_coeffs < 1 || n_coeffs > channels)
    throw Error(ErrorKind::kParameter, "n_coeffs must be in [1, channels]");
  const long n_frames = logmel.dim(0);

  Tensor<float> out({n_frames, static_cast<long>(n_coeffs)});
  const double norm0 = std::sqrt(1.0 / static_cast<double>(channels));
  const double norm = std::sqrt(2.0 / static_cast<double>(channels));
  for (long f = 0; f < n_frames; ++f) {
    const float* x = logmel.row_ptr(f);
    float* y = out.row_ptr(f);
    for (int k = 0; k < n_coeffs; ++k) {
      double acc = 0.0;
      for (long n = 0; n < channels; ++n)
        acc += static_cast<double>(x[n]) *
               std::cos(M_PI * (2.0 * static_cast<double>(n) + 1.0) * static_cast<double>(k) /
                        (2.0 * static_cast<double>(channels)));
      y[k] = static_cast<float>(acc * (k == 0 ? norm0 : norm));
    }
  }
  return out;
}

}  // namespace phq
