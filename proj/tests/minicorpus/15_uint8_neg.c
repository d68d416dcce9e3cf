void f(void)
{
    uint16_t y = 1;
    int my_uint8_t = 0;
    (void)(y + my_uint8_t);
}
