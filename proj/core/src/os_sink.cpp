#include <fcntl.h>
#include <linux/uinput.h>
#include <sys/ioctl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <string>

#include "gazectl/sinks.hpp"

namespace gazectl {

namespace {

[[noreturn]] void fail(const char* what) {
  throw std::runtime_error(std::string("uinput: ") + what + ": " + std::strerror(errno));
}

}  // namespace

UinputBackend::UinputBackend(ScreenSize screen) {
  fd_ = ::open("/dev/uinput", O_WRONLY | O_NONBLOCK);
  if (fd_ < 0) fail("open /dev/uinput");

  auto check = [&](int rc, const char* what) {
    if (rc < 0) {
      ::close(fd_);
      fd_ = -1;
      fail(what);
    }
  };
  check(::ioctl(fd_, UI_SET_EVBIT, EV_KEY), "UI_SET_EVBIT EV_KEY");
  check(::ioctl(fd_, UI_SET_EVBIT, EV_REL), "UI_SET_EVBIT EV_REL");
  check(::ioctl(fd_, UI_SET_EVBIT, EV_ABS), "UI_SET_EVBIT EV_ABS");
  check(::ioctl(fd_, UI_SET_EVBIT, EV_SYN), "UI_SET_EVBIT EV_SYN");
  for (int code = KEY_ESC; code <= KEY_MICMUTE; ++code) ::ioctl(fd_, UI_SET_KEYBIT, code);
  for (int code : {BTN_LEFT, BTN_MIDDLE, BTN_RIGHT}) check(::ioctl(fd_, UI_SET_KEYBIT, code), "UI_SET_KEYBIT");
  for (int code : {REL_X, REL_Y, REL_WHEEL}) check(::ioctl(fd_, UI_SET_RELBIT, code), "UI_SET_RELBIT");

  for (const auto& [axis, extent] : {std::pair{ABS_X, screen.width}, std::pair{ABS_Y, screen.height}}) {
    uinput_abs_setup abs{};
    abs.code = static_cast<__u16>(axis);
    abs.absinfo.minimum = 0;
    abs.absinfo.maximum = extent - 1;
    check(::ioctl(fd_, UI_SET_ABSBIT, axis), "UI_SET_ABSBIT");
    check(::ioctl(fd_, UI_ABS_SETUP, &abs), "UI_ABS_SETUP");
  }

  uinput_setup setup{};
  setup.id.bustype = BUS_VIRTUAL;
  setup.id.vendor = 0x1209;
  setup.id.product = 0x6a7e;
  std::strncpy(setup.name, "gazectl virtual input", UINPUT_MAX_NAME_SIZE - 1);
  check(::ioctl(fd_, UI_DEV_SETUP, &setup), "UI_DEV_SETUP");
  check(::ioctl(fd_, UI_DEV_CREATE), "UI_DEV_CREATE");
}

UinputBackend::~UinputBackend() {
  if (fd_ < 0) return;
  ::ioctl(fd_, UI_DEV_DESTROY);
  ::close(fd_);
}

void UinputBackend::write(std::span<const OsInputRecord> records) {
  for (const auto& r : records) {
    input_event ev{};
    ev.type = r.type;
    ev.code = r.code;
    ev.value = r.value;
    if (::write(fd_, &ev, sizeof(ev)) != static_cast<ssize_t>(sizeof(ev)) && errno != EAGAIN) {
      throw std::runtime_error(std::string("uinput: write: ") + std::strerror(errno));
    }
  }
}

}  // namespace gazectl
