// Frame-level acoustic features: windowed power spectra, log-mel energies,
// and MFCCs.
#pragma once

#include <string>
#include <vector>

#include "phq/tensor.hpp"

namespace phq {

struct AudioClip {
  std::vector<float> samples;  // mono, [-1, 1]
  int sample_rate = 16000;
};

struct FrameSpec {
  double frame_length = 0.025;  // seconds
  double hop = 0.010;           // seconds
  std::string window = "hann";  // hann | rect
  int fft_size = 512;           // power of two >= frame samples

  int frame_samples(int sample_rate) const;
  int hop_samples(int sample_rate) const;
  void validate(int sample_rate) const;
};

// Triangular mel filterbank on FFT bin frequencies, HTK mel scale.
struct MelBank {
  int n_filters = 80;
  double low_hz = 0.0;
  double high_hz = 8000.0;
  int fft_size = 512;
  int sample_rate = 16000;
  std::vector<double> weights;     // [n_filters, fft_size/2 + 1], row-major
  std::vector<double> center_hz;   // filter peak frequencies

  static MelBank make(int n_filters, double low_hz, double high_hz, int fft_size,
                      int sample_rate);
  long bins() const { return fft_size / 2 + 1; }
  double weight(int filter, long bin) const {
    return weights[static_cast<std::size_t>(filter) * static_cast<std::size_t>(bins()) +
                   static_cast<std::size_t>(bin)];
  }
};

// 2595 * log10(1 + f/700); rejects negative frequencies.
double hz_to_mel(double f);
double mel_to_hz(double m);

// In-place radix-2 complex FFT; size must be a power of two.
void fft_radix2(std::vector<double>& re, std::vector<double>& im);

// Per-frame windowed power spectrum |X_k|^2 for k = 0..fft_size/2.
// Frame count: 1 + floor((N - frame_samples) / hop_samples).
Tensor<float> stft_power(const AudioClip& clip, const FrameSpec& spec);

// log(bank . power + 1e-10), natural log, one row per frame.
Tensor<float> log_mel(const AudioClip& clip, const FrameSpec& spec, const MelBank& bank);

// Orthonormal DCT-II along the channel axis, coefficients 0..n_coeffs-1.
Tensor<float> mfcc(const Tensor<float>& logmel, int n_coeffs);

}  // namespace phq
